#include "fskyline/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fskyline/errors.hpp"

namespace fskyline {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Row s dominates row t: <= everywhere within tolerance, < somewhere beyond it.
bool row_dominates(const double* values, std::size_t cols, std::size_t s, std::size_t t,
                   double tol) {
    const double* rs = values + s * cols;
    const double* rt = values + t * cols;
    bool strict = false;
    for (std::size_t c = 0; c < cols; ++c) {
        const double gap = rs[c] - rt[c];
        if (gap > tol) {
            return false;
        }
        if (gap < -tol) {
            strict = true;
        }
    }
    return strict;
}

struct FilterOutcome {
    std::vector<std::size_t> members;                         // row indices, input order
    std::vector<std::pair<std::size_t, std::size_t>> excluded;  // (victim, dominator)
};

// Sorted-window non-dominated filter over an n x cols value matrix.
// Rows are visited by ascending coordinate sum (id as tie break), each
// candidate tested against the current window only; a final intra-window
// sweep covers sum ties that sit inside the dominance tolerance.
FilterOutcome window_filter(const double* values, std::size_t n, std::size_t cols,
                            const std::vector<std::string>& ids, double tol) {
    std::vector<double> sums(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        sums[r] = std::accumulate(values + r * cols, values + (r + 1) * cols, 0.0);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sums[a] != sums[b]) {
            return sums[a] < sums[b];
        }
        return ids[a] < ids[b];
    });

    FilterOutcome out;
    std::vector<std::size_t> window;
    for (std::size_t cand : order) {
        bool dominated = false;
        for (std::size_t w : window) {
            if (row_dominates(values, cols, w, cand, tol)) {
                out.excluded.emplace_back(cand, w);
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            window.push_back(cand);
        }
    }

    std::vector<char> drop(window.size(), 0);
    for (std::size_t i = 0; i < window.size(); ++i) {
        for (std::size_t j = 0; j < window.size(); ++j) {
            if (i != j && !drop[j] &&
                row_dominates(values, cols, window[j], window[i], tol)) {
                out.excluded.emplace_back(window[i], window[j]);
                drop[i] = 1;
                break;
            }
        }
    }
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (!drop[i]) {
            out.members.push_back(window[i]);
        }
    }
    return out;
}

std::vector<std::string> sorted_ids(const std::vector<std::string>& all,
                                    const std::vector<std::size_t>& rows) {
    std::vector<std::string> out;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        out.push_back(all[r]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> relation_ids(const Relation& relation) {
    std::vector<std::string> ids;
    ids.reserve(relation.tuples.size());
    for (const auto& t : relation.tuples) {
        ids.push_back(t.id);
    }
    return ids;
}

SetWithWitnesses nd_from_matrix(const ScoreMatrix& matrix, double tol) {
    const FilterOutcome f = window_filter(matrix.values().data(), matrix.rows(),
                                          matrix.vertex_count(), matrix.ids(), tol);
    SetWithWitnesses out;
    out.members = sorted_ids(matrix.ids(), f.members);
    for (const auto& [victim, dominator] : f.excluded) {
        out.witness.emplace(matrix.ids()[victim], matrix.ids()[dominator]);
    }
    return out;
}

PoResult po_from_nd(const ScoreMatrix& matrix, const std::vector<std::string>& nd_members,
                    double tol) {
    PoResult out;
    for (const auto& target : nd_members) {
        std::vector<std::string> candidates;
        candidates.reserve(nd_members.size() - 1);
        for (const auto& id : nd_members) {
            if (id != target) {
                candidates.push_back(id);
            }
        }
        const auto verdict = lp::convex_combination_dominates(matrix, candidates, target, tol);
        if (verdict.dominated) {
            out.witness.emplace(target,
                                ConvexWitness{verdict.witness_ids, verdict.witness_lambdas});
        } else {
            out.members.push_back(target);
        }
    }
    std::sort(out.members.begin(), out.members.end());
    return out;
}

void require_non_empty(const Relation& relation) {
    if (relation.tuples.empty()) {
        throw DataError("query requires a non-empty relation");
    }
}

}  // namespace

bool f_dominates(const ScoreMatrix& scores, const std::string& s, const std::string& t,
                 double tolerance) {
    if (s == t) {
        throw DataError("f_dominates requires two distinct tuple ids");
    }
    const std::size_t rs = scores.row_of(s);
    const std::size_t rt = scores.row_of(t);
    bool strict = false;
    for (std::size_t v = 0; v < scores.vertex_count(); ++v) {
        const double gap = scores.at(rs, v) - scores.at(rt, v);
        if (gap > tolerance) {
            return false;
        }
        if (gap < -tolerance) {
            strict = true;
        }
    }
    return strict;
}

std::vector<std::string> sky(const Relation& relation, const ScoringFamily& family,
                             const EngineConfig& config) {
    require_non_empty(relation);
    const std::vector<double> g =
        transformed_values(relation, family, config.effective_numerics(), config.parallelism);
    const FilterOutcome f = window_filter(g.data(), relation.tuples.size(),
                                          family.schema.arity(), relation_ids(relation),
                                          config.tolerance);
    return sorted_ids(relation_ids(relation), f.members);
}

SetWithWitnesses nd(const Relation& relation, const ScoringFamily& family,
                    const EngineConfig& config) {
    require_non_empty(relation);
    const ScoreMatrix matrix =
        score_matrix(relation, family, config.effective_numerics(), config.parallelism);
    return nd_from_matrix(matrix, config.tolerance);
}

PoResult po(const Relation& relation, const ScoringFamily& family, const EngineConfig& config) {
    require_non_empty(relation);
    const ScoreMatrix matrix =
        score_matrix(relation, family, config.effective_numerics(), config.parallelism);
    const SetWithWitnesses ndres = nd_from_matrix(matrix, config.tolerance);
    return po_from_nd(matrix, ndres.members, config.tolerance);
}

QueryResult run_query(const Relation& relation, const ScoringFamily& family,
                      const EngineConfig& config, const WantSets& want) {
    QueryResult result;
    result.config = config;
    result.clamp_used = config.use_clamp;
    if (!want.sky && !want.nd && !want.po) {
        return result;
    }
    require_non_empty(relation);

    const NumericsConfig numerics = config.effective_numerics();
    const auto ids = relation_ids(relation);

    auto t0 = Clock::now();
    const std::vector<double> g =
        transformed_values(relation, family, numerics, config.parallelism);
    ScoreMatrix matrix;
    {
        // Vertex scores from the shared transformed values.
        const auto& vertices = family.polytope.vertices();
        const std::size_t n = relation.tuples.size();
        const std::size_t d = family.schema.arity();
        std::vector<double> values(n * vertices.size(), 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            for (std::size_t v = 0; v < vertices.size(); ++v) {
                double acc = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    acc += vertices[v][i] * g[t * d + i];
                }
                values[t * vertices.size() + v] = acc;
            }
        }
        matrix = ScoreMatrix(ids, vertices.size(), std::move(values));
    }
    result.timing_ms.score = ms_since(t0);

    if (want.sky) {
        t0 = Clock::now();
        const FilterOutcome f = window_filter(g.data(), relation.tuples.size(),
                                              family.schema.arity(), ids, config.tolerance);
        result.sky = sorted_ids(ids, f.members);
        for (const auto& [victim, dominator] : f.excluded) {
            result.sky_witness.emplace(ids[victim], ids[dominator]);
        }
        result.timing_ms.sky = ms_since(t0);
    }

    std::vector<std::string> nd_members;
    if (want.nd || want.po) {
        t0 = Clock::now();
        SetWithWitnesses ndres = nd_from_matrix(matrix, config.tolerance);
        nd_members = ndres.members;
        result.timing_ms.nd = ms_since(t0);
        if (want.nd) {
            result.nd = ndres.members;
            result.nd_witness = std::move(ndres.witness);
        }
    }

    if (want.po) {
        t0 = Clock::now();
        PoResult pores = po_from_nd(matrix, nd_members, config.tolerance);
        result.po = std::move(pores.members);
        result.po_witness = std::move(pores.witness);
        result.timing_ms.po = ms_since(t0);
    }
    return result;
}

}  // namespace fskyline
