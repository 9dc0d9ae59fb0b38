#ifndef FSKYLINE_ORACLE_HPP
#define FSKYLINE_ORACLE_HPP

#include <string>
#include <vector>

#include "fskyline/engine.hpp"
#include "fskyline/scoring.hpp"

/// Brute-force reference implementations. Correctness anchors for tests and
/// the --oracle cross-check: no sorting, no pruning, no LP. Orders of
/// magnitude slower than the engine by design.
namespace fskyline::oracle {

struct GridSpec {
    double weight_step = 1e-2;   // weight-space sampling resolution
    double lambda_step = 1e-2;   // mixture-simplex sampling resolution
    double margin = 1e-6;        // certification margin for robust instances
};

/// All-pairs componentwise comparison in transformed space.
std::vector<std::string> sky_naive(const Relation& relation, const ScoringFamily& family,
                                   const EngineConfig& config = {});

/// All-pairs F-dominance over the vertex score matrix.
std::vector<std::string> nd_brute(const Relation& relation, const ScoringFamily& family,
                                  const EngineConfig& config = {});

/// One-sided grid certification of potential optimality over the brute-force
/// ND set. certified_po: uniquely best at some sampled weight vector with
/// margin to spare. certified_not_po: a sampled mixture of the other ND
/// members beats it at every vertex with margin to spare. Everything else is
/// undecided; the oracle is sound on its certified sets and silent otherwise.
struct PoCertification {
    std::vector<std::string> certified_po;
    std::vector<std::string> certified_not_po;
    std::vector<std::string> undecided;
};

PoCertification po_grid(const Relation& relation, const ScoringFamily& family,
                        const GridSpec& grid = {}, const EngineConfig& config = {});

/// Simplex-composition grid restricted to the polytope. May be empty for
/// thin polytopes that dodge every grid point.
std::vector<std::vector<double>> weight_grid(const WeightPolytope& polytope, double step);

}  // namespace fskyline::oracle

#endif  // FSKYLINE_ORACLE_HPP
