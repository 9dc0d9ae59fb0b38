#include "fskyline/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "fskyline/errors.hpp"

namespace fskyline {

namespace {

constexpr double kFeasibilityTol = 1e-9;
constexpr double kDedupTol = 1e-9;
constexpr double kPivotTol = 1e-12;

void check_transform_param(TransformKind kind, double param) {
    switch (kind) {
        case TransformKind::power:
            if (!std::isfinite(param) || param < 1.0) {
                throw DataError("power transform requires exponent p >= 1, got " +
                                std::to_string(param));
            }
            break;
        case TransformKind::poisson_cdf:
        case TransformKind::poisson_survival:
        case TransformKind::peak:
            if (!std::isfinite(param) || param < 0.0) {
                throw DataError(std::string(to_string(kind)) +
                                " transform requires threshold k >= 0, got " +
                                std::to_string(param));
            }
            break;
        case TransformKind::identity:
        case TransformKind::complement:
            break;
    }
}

void check_transform_input(TransformKind kind, double value) {
    const AttributeKind required =
        requires_rate_attribute(kind) ? AttributeKind::rate : AttributeKind::normalized;
    if (!value_in_domain(required, value)) {
        throw DataError(std::string(to_string(kind)) + " transform applied to value " +
                        std::to_string(value) + " outside its " + to_string(required) +
                        " domain");
    }
}

// Solves a dense d x d system in place; returns false when near-singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& out) {
    const std::size_t d = b.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) {
                pivot = r;
            }
        }
        if (std::fabs(a[pivot][col]) < kPivotTol) {
            return false;
        }
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < d; ++r) {
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < d; ++c) {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    out.assign(d, 0.0);
    for (std::size_t i = d; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < d; ++c) {
            acc -= a[i][c] * out[c];
        }
        out[i] = acc / a[i][i];
    }
    return true;
}

bool satisfies(const LinearConstraint& row, const std::vector<double>& w, double tol) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < row.coeffs.size(); ++i) {
        lhs += row.coeffs[i] * w[i];
    }
    switch (row.sense) {
        case ConstraintSense::less_equal:
            return lhs <= row.bound + tol;
        case ConstraintSense::greater_equal:
            return lhs >= row.bound - tol;
        case ConstraintSense::equal:
            return std::fabs(lhs - row.bound) <= tol;
    }
    return false;
}

bool feasible(const std::vector<double>& w, const std::vector<LinearConstraint>& constraints,
              double tol) {
    double sum = 0.0;
    for (double wi : w) {
        if (wi < -tol || wi > 1.0 + tol) {
            return false;
        }
        sum += wi;
    }
    if (std::fabs(sum - 1.0) > tol) {
        return false;
    }
    for (const auto& row : constraints) {
        if (!satisfies(row, w, tol)) {
            return false;
        }
    }
    return true;
}

void check_constraint_rows(std::size_t dimension,
                           const std::vector<LinearConstraint>& constraints) {
    for (const auto& row : constraints) {
        if (row.coeffs.size() != dimension) {
            throw DataError("constraint row has " + std::to_string(row.coeffs.size()) +
                            " coefficients, polytope dimension is " + std::to_string(dimension));
        }
        for (double c : row.coeffs) {
            if (!std::isfinite(c)) {
                throw DataError("constraint coefficients must be finite");
            }
        }
        if (!std::isfinite(row.bound)) {
            throw DataError("constraint bound must be finite");
        }
    }
}

// Runs fn(row) over [0, n) split across `parallelism` threads; exceptions
// from workers are rethrown on the calling thread.
template <typename Fn>
void parallel_rows(std::size_t n, unsigned parallelism, Fn&& fn) {
    if (parallelism <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    const unsigned workers = std::min<unsigned>(parallelism, std::thread::hardware_concurrency());
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned t = 0; t < workers; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) {
            break;
        }
        threads.emplace_back([&, t, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace

const char* to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::identity: return "identity";
        case TransformKind::power: return "power";
        case TransformKind::poisson_cdf: return "poisson_cdf";
        case TransformKind::poisson_survival: return "poisson_survival";
        case TransformKind::peak: return "peak";
        case TransformKind::complement: return "complement";
    }
    return "?";
}

TransformKind transform_kind_from_string(const std::string& text) {
    if (text == "identity") return TransformKind::identity;
    if (text == "power") return TransformKind::power;
    if (text == "poisson_cdf") return TransformKind::poisson_cdf;
    if (text == "poisson_survival") return TransformKind::poisson_survival;
    if (text == "peak") return TransformKind::peak;
    if (text == "complement") return TransformKind::complement;
    throw DataError("unknown transform kind '" + text + "'");
}

bool requires_rate_attribute(TransformKind kind) {
    return kind == TransformKind::poisson_cdf || kind == TransformKind::poisson_survival ||
           kind == TransformKind::peak;
}

bool is_monotone(TransformKind kind) { return kind != TransformKind::peak; }

Transform Transform::identity() { return Transform{TransformKind::identity, 0.0}; }

Transform Transform::power(double p) {
    check_transform_param(TransformKind::power, p);
    return Transform{TransformKind::power, p};
}

Transform Transform::poisson_cdf(double k) {
    check_transform_param(TransformKind::poisson_cdf, k);
    return Transform{TransformKind::poisson_cdf, k};
}

Transform Transform::poisson_survival(double k) {
    check_transform_param(TransformKind::poisson_survival, k);
    return Transform{TransformKind::poisson_survival, k};
}

Transform Transform::peak(double k) {
    check_transform_param(TransformKind::peak, k);
    return Transform{TransformKind::peak, k};
}

Transform Transform::complement() { return Transform{TransformKind::complement, 0.0}; }

const char* to_string(ConstraintSense sense) {
    switch (sense) {
        case ConstraintSense::less_equal: return "<=";
        case ConstraintSense::greater_equal: return ">=";
        case ConstraintSense::equal: return "=";
    }
    return "?";
}

ConstraintSense constraint_sense_from_string(const std::string& text) {
    if (text == "<=") return ConstraintSense::less_equal;
    if (text == ">=") return ConstraintSense::greater_equal;
    if (text == "=" || text == "==") return ConstraintSense::equal;
    throw DataError("unknown constraint sense '" + text + "' (expected <=, >= or =)");
}

std::vector<std::vector<double>> enumerate_vertices(
    std::size_t dimension, const std::vector<LinearConstraint>& constraints) {
    if (dimension == 0) {
        throw DataError("weight polytope dimension must be >= 1");
    }
    if (dimension > 8) {
        throw DataError("weight polytope dimension " + std::to_string(dimension) +
                        " unsupported (combinatorial vertex enumeration caps at 8)");
    }
    check_constraint_rows(dimension, constraints);

    // Hyperplane pool: user rows tightened to equalities, then the box facets.
    struct Plane {
        std::vector<double> coeffs;
        double rhs;
    };
    std::vector<Plane> pool;
    pool.reserve(constraints.size() + 2 * dimension);
    for (const auto& row : constraints) {
        pool.push_back(Plane{row.coeffs, row.bound});
    }
    for (std::size_t i = 0; i < dimension; ++i) {
        std::vector<double> unit(dimension, 0.0);
        unit[i] = 1.0;
        pool.push_back(Plane{unit, 0.0});
        pool.push_back(Plane{std::move(unit), 1.0});
    }

    std::vector<std::vector<double>> vertices;
    const std::size_t need = dimension - 1;
    std::vector<std::size_t> pick(need);
    std::vector<double> solution;

    // Iterates all (dimension-1)-subsets of the pool.
    auto try_subset = [&]() {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        a.reserve(dimension);
        b.reserve(dimension);
        for (std::size_t idx : pick) {
            a.push_back(pool[idx].coeffs);
            b.push_back(pool[idx].rhs);
        }
        a.emplace_back(dimension, 1.0);  // normalization sum(w) = 1
        b.push_back(1.0);
        if (!solve_square(std::move(a), std::move(b), solution)) {
            return;
        }
        if (!feasible(solution, constraints, kFeasibilityTol)) {
            return;
        }
        for (const auto& existing : vertices) {
            double dist = 0.0;
            for (std::size_t i = 0; i < dimension; ++i) {
                dist = std::max(dist, std::fabs(existing[i] - solution[i]));
            }
            if (dist <= kDedupTol) {
                return;
            }
        }
        vertices.push_back(solution);
    };

    auto next_combination = [&]() {
        std::size_t i = need;
        while (i > 0) {
            --i;
            if (pick[i] + (need - i) < pool.size()) {
                ++pick[i];
                for (std::size_t j = i + 1; j < need; ++j) {
                    pick[j] = pick[j - 1] + 1;
                }
                return true;
            }
        }
        return false;
    };

    if (need == 0) {
        try_subset();
    } else if (pool.size() >= need) {
        for (std::size_t i = 0; i < need; ++i) {
            pick[i] = i;
        }
        do {
            try_subset();
        } while (next_combination());
    }

    if (vertices.empty()) {
        throw DataError("weight polytope is empty: constraints admit no weight vector");
    }
    std::sort(vertices.begin(), vertices.end());
    return vertices;
}

WeightPolytope::WeightPolytope(std::size_t dimension, std::vector<LinearConstraint> constraints)
    : dimension_(dimension), constraints_(std::move(constraints)) {
    vertices_ = enumerate_vertices(dimension_, constraints_);
}

bool WeightPolytope::contains(const std::vector<double>& w, double tolerance) const {
    if (w.size() != dimension_) {
        return false;
    }
    return feasible(w, constraints_, tolerance);
}

void validate_family(const ScoringFamily& family) {
    validate_schema(family.schema);
    const std::size_t d = family.schema.arity();
    if (family.transforms.size() != d) {
        throw DataError("scoring family declares " + std::to_string(family.transforms.size()) +
                        " transforms for " + std::to_string(d) + " attributes");
    }
    if (family.polytope.dimension() != d) {
        throw DataError("weight polytope dimension " +
                        std::to_string(family.polytope.dimension()) +
                        " does not match schema arity " + std::to_string(d));
    }
    for (std::size_t i = 0; i < d; ++i) {
        const TransformKind kind = family.transforms[i].kind;
        check_transform_param(kind, family.transforms[i].param);
        const AttributeKind required =
            requires_rate_attribute(kind) ? AttributeKind::rate : AttributeKind::normalized;
        if (family.schema.kinds[i] != required) {
            throw DataError("transform " + std::string(to_string(kind)) + " on attribute '" +
                            family.schema.names[i] + "' requires a " + to_string(required) +
                            " attribute, schema declares " +
                            to_string(family.schema.kinds[i]));
        }
    }
}

ScoreMatrix::ScoreMatrix(std::vector<std::string> ids, std::size_t vertex_count,
                         std::vector<double> values)
    : ids_(std::move(ids)), vertex_count_(vertex_count), values_(std::move(values)) {
    if (values_.size() != ids_.size() * vertex_count_) {
        throw DataError("score matrix shape mismatch");
    }
    row_index_.reserve(ids_.size());
    for (std::size_t r = 0; r < ids_.size(); ++r) {
        if (!row_index_.emplace(ids_[r], r).second) {
            throw DataError("duplicate tuple id '" + ids_[r] + "' in score matrix");
        }
    }
}

std::size_t ScoreMatrix::row_of(const std::string& id) const {
    const auto it = row_index_.find(id);
    if (it == row_index_.end()) {
        throw DataError("unknown tuple id '" + id + "'");
    }
    return it->second;
}

double apply_transform(const Transform& transform, double value, const NumericsConfig& config) {
    check_transform_param(transform.kind, transform.param);
    check_transform_input(transform.kind, value);
    switch (transform.kind) {
        case TransformKind::identity:
            return value;
        case TransformKind::power:
            return std::pow(value, transform.param);
        case TransformKind::complement:
            return 1.0 - value;
        case TransformKind::poisson_cdf: {
            const PoissonParams po{value};
            return config.clamp_enabled ? clamped_cdf(po, transform.param, config)
                                        : cdf(po, transform.param);
        }
        case TransformKind::poisson_survival: {
            const PoissonParams po{value};
            return config.clamp_enabled ? clamped_survival(po, transform.param, config)
                                        : survival(po, transform.param, config);
        }
        case TransformKind::peak: {
            // One monotone branch per tuple: cdf below the mean, survival at
            // or above it.
            const PoissonParams po{value};
            if (transform.param < value) {
                return config.clamp_enabled ? clamped_cdf(po, transform.param, config)
                                            : cdf(po, transform.param);
            }
            return config.clamp_enabled ? clamped_survival(po, transform.param, config)
                                        : survival(po, transform.param, config);
        }
    }
    throw DataError("unhandled transform kind");
}

std::vector<double> transformed_values(const Relation& relation, const ScoringFamily& family,
                                       const NumericsConfig& config, unsigned parallelism) {
    validate_family(family);
    if (relation.schema.names != family.schema.names ||
        relation.schema.kinds != family.schema.kinds) {
        throw DataError("relation schema does not match scoring family schema");
    }
    const std::size_t n = relation.tuples.size();
    const std::size_t d = family.schema.arity();
    std::vector<double> g(n * d, 0.0);
    parallel_rows(n, parallelism, [&](std::size_t t) {
        const Tuple& tuple = relation.tuples[t];
        if (tuple.values.size() != d) {
            throw DataError("tuple '" + tuple.id + "' arity mismatch");
        }
        for (std::size_t i = 0; i < d; ++i) {
            try {
                g[t * d + i] = apply_transform(family.transforms[i], tuple.values[i], config);
            } catch (const DataError& e) {
                throw DataError("tuple '" + tuple.id + "', attribute '" +
                                family.schema.names[i] + "': " + e.what());
            }
        }
    });
    return g;
}

ScoreMatrix score_matrix(const Relation& relation, const ScoringFamily& family,
                         const NumericsConfig& config, unsigned parallelism) {
    const std::vector<double> g = transformed_values(relation, family, config, parallelism);
    const std::size_t n = relation.tuples.size();
    const std::size_t d = family.schema.arity();
    const auto& vertices = family.polytope.vertices();
    const std::size_t v_count = vertices.size();

    std::vector<double> values(n * v_count, 0.0);
    parallel_rows(n, parallelism, [&](std::size_t t) {
        for (std::size_t v = 0; v < v_count; ++v) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                acc += vertices[v][i] * g[t * d + i];
            }
            values[t * v_count + v] = acc;
        }
    });

    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& tuple : relation.tuples) {
        ids.push_back(tuple.id);
    }
    return ScoreMatrix(std::move(ids), v_count, std::move(values));
}

bool is_tuple_distinguishing_sample(const ScoringFamily& family, const std::vector<Tuple>& tuples,
                                    const NumericsConfig& config) {
    Relation sample;
    sample.schema = family.schema;
    sample.tuples = tuples;
    for (std::size_t i = 0; i < sample.tuples.size(); ++i) {
        sample.tuples[i].id = "s" + std::to_string(i);  // ids are irrelevant here
    }
    const ScoreMatrix m = score_matrix(sample, family, config);
    constexpr double kTie = 1e-12;
    for (std::size_t a = 0; a < m.rows(); ++a) {
        for (std::size_t b = a + 1; b < m.rows(); ++b) {
            bool identical = true;
            for (std::size_t v = 0; v < m.vertex_count(); ++v) {
                if (std::fabs(m.at(a, v) - m.at(b, v)) > kTie) {
                    identical = false;
                    break;
                }
            }
            if (identical) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace fskyline
