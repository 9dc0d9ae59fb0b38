#ifndef FSKYLINE_SCORING_HPP
#define FSKYLINE_SCORING_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "fskyline/poisson.hpp"
#include "fskyline/relation.hpp"

namespace fskyline {

/// Per-attribute scoring transforms. Every transform maps into [0, 1];
/// weights handle scale. Lower transformed values are better throughout
/// the engine, so survival/complement express "higher raw value preferred".
enum class TransformKind {
    identity,          // normalized attribute as-is
    power,             // value^p, p >= 1
    poisson_cdf,       // P(X <= k), X ~ Po(value)      (rate attribute)
    poisson_survival,  // P(X > k), X ~ Po(value)       (rate attribute)
    peak,              // cdf branch below the mean, survival branch at/above
    complement,        // 1 - value
};

const char* to_string(TransformKind kind);
TransformKind transform_kind_from_string(const std::string& text);

/// True for poisson_cdf / poisson_survival / peak, which consume a rate
/// attribute; the remaining kinds consume a normalized one.
bool requires_rate_attribute(TransformKind kind);

/// All kinds except peak are monotone in the raw attribute value.
bool is_monotone(TransformKind kind);

struct Transform {
    TransformKind kind = TransformKind::identity;
    double param = 0.0;  // exponent p for power, count threshold k for poisson kinds

    static Transform identity();
    static Transform power(double p);
    static Transform poisson_cdf(double k);
    static Transform poisson_survival(double k);
    static Transform peak(double k);
    static Transform complement();
};

enum class ConstraintSense { less_equal, greater_equal, equal };

const char* to_string(ConstraintSense sense);
ConstraintSense constraint_sense_from_string(const std::string& text);

/// One linear row over the weight vector: coeffs . w  (sense)  bound.
struct LinearConstraint {
    std::vector<double> coeffs;
    ConstraintSense sense = ConstraintSense::less_equal;
    double bound = 0.0;
};

/// Enumerates the extreme points of { w : sum(w)=1, 0<=w<=1, user rows }.
/// Every subset of dimension-1 hyperplanes (user rows as equalities plus the
/// box facets) is intersected with the normalization plane; feasible
/// solutions are kept, deduplicated, and returned in lexicographic order.
/// Throws DataError when the polytope is empty or dimension > 8.
std::vector<std::vector<double>> enumerate_vertices(
    std::size_t dimension, const std::vector<LinearConstraint>& constraints);

/// Admissible weight vectors: the simplex sum(w)=1, 0<=w<=1 intersected with
/// user constraints. Vertices are enumerated eagerly at construction (linear
/// score gaps attain their extrema there), so an empty polytope fails fast.
class WeightPolytope {
public:
    WeightPolytope(std::size_t dimension, std::vector<LinearConstraint> constraints);

    std::size_t dimension() const { return dimension_; }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }
    const std::vector<std::vector<double>>& vertices() const { return vertices_; }

    bool contains(const std::vector<double>& w, double tolerance = 1e-9) const;

private:
    std::size_t dimension_;
    std::vector<LinearConstraint> constraints_;
    std::vector<std::vector<double>> vertices_;
};

/// The scoring-function family F: one transform per schema attribute plus a
/// weight polytope. f_w(t) = sum_i w_i * g_i(t[i]) for every w in the
/// polytope.
struct ScoringFamily {
    AttributeSchema schema;
    std::vector<Transform> transforms;
    WeightPolytope polytope;
};

/// Transforms align 1:1 with schema attributes and match their kinds;
/// polytope dimension equals the arity.
void validate_family(const ScoringFamily& family);

/// Tuples x polytope-vertices matrix of weighted transformed scores,
/// S[t][v] = f_{w(v)}(t). The sole input to the dominance tests.
class ScoreMatrix {
public:
    ScoreMatrix() = default;
    ScoreMatrix(std::vector<std::string> ids, std::size_t vertex_count,
                std::vector<double> values);

    const std::vector<std::string>& ids() const { return ids_; }
    std::size_t rows() const { return ids_.size(); }
    std::size_t vertex_count() const { return vertex_count_; }

    double at(std::size_t row, std::size_t vertex) const {
        return values_[row * vertex_count_ + vertex];
    }
    /// Row-major backing store, rows() x vertex_count().
    const std::vector<double>& values() const { return values_; }
    /// Throws DataError on unknown id.
    std::size_t row_of(const std::string& id) const;

private:
    std::vector<std::string> ids_;
    std::size_t vertex_count_ = 0;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> row_index_;
};

/// Applies one transform to one raw attribute value. Domain violations throw
/// DataError. The clamped Poisson evaluators are used when
/// config.clamp_enabled is set.
double apply_transform(const Transform& transform, double value,
                       const NumericsConfig& config = {});

/// n x d matrix of per-attribute transformed values g_i(t[i]), row-major.
/// Transform evaluations happen once per (tuple, attribute) and are reused
/// across vertices. parallelism > 1 splits rows over threads; output is
/// deterministic regardless.
std::vector<double> transformed_values(const Relation& relation, const ScoringFamily& family,
                                       const NumericsConfig& config = {},
                                       unsigned parallelism = 1);

ScoreMatrix score_matrix(const Relation& relation, const ScoringFamily& family,
                         const NumericsConfig& config = {}, unsigned parallelism = 1);

/// Sampled check of the tuple-distinguishing property: false iff two tuples
/// in the sample share their entire score vector across vertices.
bool is_tuple_distinguishing_sample(const ScoringFamily& family,
                                    const std::vector<Tuple>& tuples,
                                    const NumericsConfig& config = {});

}  // namespace fskyline

#endif  // FSKYLINE_SCORING_HPP
