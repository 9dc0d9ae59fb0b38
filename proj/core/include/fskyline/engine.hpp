#ifndef FSKYLINE_ENGINE_HPP
#define FSKYLINE_ENGINE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fskyline/lp.hpp"
#include "fskyline/scoring.hpp"

namespace fskyline {

struct EngineConfig {
    /// Dominance comparisons treat score gaps within this as ties.
    double tolerance = 1e-9;
    /// Route Poisson transforms through the two-sigma clamp fast path.
    bool use_clamp = false;
    /// Worker hint for score evaluation; results are identical at any value.
    unsigned parallelism = 1;
    NumericsConfig numerics;

    /// Numerics with the clamp flag resolved from use_clamp.
    NumericsConfig effective_numerics() const {
        NumericsConfig cfg = numerics;
        cfg.clamp_enabled = use_clamp;
        return cfg;
    }
};

/// Mixture of other tuples that F-dominates an excluded one.
struct ConvexWitness {
    std::vector<std::string> ids;
    std::vector<double> lambdas;
};

struct PhaseTimings {
    double score = 0.0;
    double sky = 0.0;
    double nd = 0.0;
    double po = 0.0;
};

struct SetWithWitnesses {
    std::vector<std::string> members;               // sorted lexicographically
    std::map<std::string, std::string> witness;     // excluded id -> dominator id
};

struct PoResult {
    std::vector<std::string> members;               // sorted lexicographically
    std::map<std::string, ConvexWitness> witness;   // nd member excluded from po
};

struct WantSets {
    bool sky = false;
    bool nd = false;
    bool po = false;
};

struct QueryResult {
    std::optional<std::vector<std::string>> sky;
    std::optional<std::vector<std::string>> nd;
    std::optional<std::vector<std::string>> po;
    std::map<std::string, std::string> sky_witness;
    std::map<std::string, std::string> nd_witness;
    std::map<std::string, ConvexWitness> po_witness;
    PhaseTimings timing_ms;
    EngineConfig config;   // echo of the configuration that produced the result
    bool clamp_used = false;
};

/// Does s F-dominate t? True iff s's score is <= t's at every polytope
/// vertex (within tolerance) and strictly below at one or more. The vertex
/// test realizes the minimum of the w-linear gap over the whole polytope.
bool f_dominates(const ScoreMatrix& scores, const std::string& s, const std::string& t,
                 double tolerance);

/// Classic skyline: tuples not Pareto-dominated componentwise in transformed
/// attribute space (lower better). Block-nested-loop with a pre-sort on the
/// coordinate sum.
std::vector<std::string> sky(const Relation& relation, const ScoringFamily& family,
                             const EngineConfig& config = {});

/// Non-dominated flexible skyline: tuples no other tuple F-dominates.
/// Candidates are sorted by ascending vertex-score sum (a dominator always
/// precedes its victims) and tested against the running non-dominated
/// window only.
SetWithWitnesses nd(const Relation& relation, const ScoringFamily& family,
                    const EngineConfig& config = {});

/// Potentially optimal flexible skyline: the ND members whose score row is
/// not F-dominated by any convex combination of the other ND members.
PoResult po(const Relation& relation, const ScoringFamily& family,
            const EngineConfig& config = {});

/// Computes the requested sets over one shared score matrix, with witnesses
/// and per-phase timings.
QueryResult run_query(const Relation& relation, const ScoringFamily& family,
                      const EngineConfig& config, const WantSets& want);

}  // namespace fskyline

#endif  // FSKYLINE_ENGINE_HPP
