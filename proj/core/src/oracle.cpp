#include "fskyline/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "fskyline/errors.hpp"

namespace fskyline::oracle {

namespace {

// Deliberately local re-statement of the dominance predicate; the oracle
// must not borrow the engine's pruning path.
bool dominates(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double gap = a[i] - b[i];
        if (gap > tol) {
            return false;
        }
        if (gap < -tol) {
            strict = true;
        }
    }
    return strict;
}

std::vector<std::vector<double>> as_rows(const std::vector<double>& flat, std::size_t n,
                                         std::size_t cols) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(cols));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            rows[r][c] = flat[r * cols + c];
        }
    }
    return rows;
}

std::vector<std::string> keep_non_dominated(const std::vector<std::vector<double>>& rows,
                                            const std::vector<std::string>& ids, double tol) {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < rows.size(); ++t) {
        bool excluded = false;
        for (std::size_t s = 0; s < rows.size() && !excluded; ++s) {
            if (s != t && dominates(rows[s], rows[t], tol)) {
                excluded = true;
            }
        }
        if (!excluded) {
            out.push_back(ids[t]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> ids_of(const Relation& relation) {
    std::vector<std::string> ids;
    ids.reserve(relation.tuples.size());
    for (const auto& t : relation.tuples) {
        ids.push_back(t.id);
    }
    return ids;
}

// Enumerates compositions of `steps` into `parts` non-negative integers and
// hands each to fn as a weight vector with coordinates count/steps.
template <typename Fn>
void for_each_composition(std::size_t parts, std::size_t steps, Fn&& fn) {
    std::vector<std::size_t> counts(parts, 0);
    std::vector<double> w(parts, 0.0);
    const double inv = 1.0 / static_cast<double>(steps);
    auto rec = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
        if (idx + 1 == parts) {
            counts[idx] = left;
            for (std::size_t i = 0; i < parts; ++i) {
                w[i] = static_cast<double>(counts[i]) * inv;
            }
            fn(w);
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[idx] = c;
            self(self, idx + 1, left - c);
        }
    };
    rec(rec, 0, steps);
}

double composition_count(std::size_t parts, std::size_t steps) {
    // C(steps + parts - 1, parts - 1)
    double acc = 1.0;
    for (std::size_t i = 1; i < parts; ++i) {
        acc *= static_cast<double>(steps + i) / static_cast<double>(i);
    }
    return acc;
}

}  // namespace

std::vector<std::vector<double>> weight_grid(const WeightPolytope& polytope, double step) {
    if (!(step > 0.0 && step < 1.0)) {
        throw DataError("weight grid step must lie in (0, 1)");
    }
    const std::size_t steps = static_cast<std::size_t>(std::lround(1.0 / step));
    if (composition_count(polytope.dimension(), steps) > 5e7) {
        throw DataError("weight grid too dense for dimension " +
                        std::to_string(polytope.dimension()) + "; coarsen the step");
    }
    std::vector<std::vector<double>> samples;
    for_each_composition(polytope.dimension(), steps, [&](const std::vector<double>& w) {
        if (polytope.contains(w, 1e-12)) {
            samples.push_back(w);
        }
    });
    return samples;
}

std::vector<std::string> sky_naive(const Relation& relation, const ScoringFamily& family,
                                   const EngineConfig& config) {
    if (relation.tuples.size() > 10000) {
        throw DataError("sky_naive caps at 10000 tuples (quadratic reference path)");
    }
    const auto flat =
        transformed_values(relation, family, config.effective_numerics(), 1);
    const auto rows = as_rows(flat, relation.tuples.size(), family.schema.arity());
    return keep_non_dominated(rows, ids_of(relation), config.tolerance);
}

std::vector<std::string> nd_brute(const Relation& relation, const ScoringFamily& family,
                                  const EngineConfig& config) {
    if (relation.tuples.size() > 500) {
        throw DataError("nd_brute caps at 500 tuples (all-pairs with full vertex checks)");
    }
    const ScoreMatrix m = score_matrix(relation, family, config.effective_numerics(), 1);
    const auto rows = as_rows(m.values(), m.rows(), m.vertex_count());
    return keep_non_dominated(rows, m.ids(), config.tolerance);
}

PoCertification po_grid(const Relation& relation, const ScoringFamily& family,
                        const GridSpec& grid, const EngineConfig& config) {
    PoCertification cert;
    const std::vector<std::string> nd_ids = nd_brute(relation, family, config);
    if (nd_ids.size() > 50) {
        throw DataError("po_grid caps at 50 non-dominated tuples");
    }

    // Transformed values for whole-relation minimization at sampled weights.
    const auto flat = transformed_values(relation, family, config.effective_numerics(), 1);
    const std::size_t n = relation.tuples.size();
    const std::size_t d = family.schema.arity();
    const auto all_ids = ids_of(relation);
    const auto samples = weight_grid(family.polytope, grid.weight_step);

    std::vector<char> is_certified_po(nd_ids.size(), 0);
    std::vector<double> scores(n, 0.0);
    for (const auto& w : samples) {
        for (std::size_t t = 0; t < n; ++t) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                acc += w[i] * flat[t * d + i];
            }
            scores[t] = acc;
        }
        std::size_t best = 0;
        for (std::size_t t = 1; t < n; ++t) {
            if (scores[t] < scores[best]) {
                best = t;
            }
        }
        // Unique minimizer over the whole relation, with margin to spare.
        bool unique = true;
        for (std::size_t t = 0; t < n && unique; ++t) {
            if (t != best && scores[t] - scores[best] <= grid.margin) {
                unique = false;
            }
        }
        if (unique) {
            const auto it = std::find(nd_ids.begin(), nd_ids.end(), all_ids[best]);
            if (it != nd_ids.end()) {
                is_certified_po[static_cast<std::size_t>(it - nd_ids.begin())] = 1;
            }
        }
    }

    // Mixture search over the other ND members: singles, pairs on the fine
    // lambda grid, triples on a coarser one when the candidate set is small.
    const ScoreMatrix matrix = score_matrix(relation, family, config.effective_numerics(), 1);
    const std::size_t v_count = matrix.vertex_count();
    std::vector<std::size_t> nd_rows;
    nd_rows.reserve(nd_ids.size());
    for (const auto& id : nd_ids) {
        nd_rows.push_back(matrix.row_of(id));
    }

    auto beats_everywhere = [&](const std::vector<double>& mixture, std::size_t target_row) {
        for (std::size_t v = 0; v < v_count; ++v) {
            if (mixture[v] > matrix.at(target_row, v) - grid.margin) {
                return false;
            }
        }
        return true;
    };

    std::vector<char> is_certified_not_po(nd_ids.size(), 0);
    const std::size_t lambda_steps =
        static_cast<std::size_t>(std::lround(1.0 / grid.lambda_step));
    std::vector<double> mixture(v_count, 0.0);
    for (std::size_t ti = 0; ti < nd_ids.size(); ++ti) {
        const std::size_t target_row = nd_rows[ti];
        std::vector<std::size_t> cands;
        for (std::size_t ci = 0; ci < nd_ids.size(); ++ci) {
            if (ci != ti) {
                cands.push_back(nd_rows[ci]);
            }
        }
        bool found = false;
        for (std::size_t a = 0; a < cands.size() && !found; ++a) {
            for (std::size_t v = 0; v < v_count; ++v) {
                mixture[v] = matrix.at(cands[a], v);
            }
            found = beats_everywhere(mixture, target_row);
        }
        for (std::size_t a = 0; a < cands.size() && !found; ++a) {
            for (std::size_t b = a + 1; b < cands.size() && !found; ++b) {
                for (std::size_t s = 0; s <= lambda_steps && !found; ++s) {
                    const double l = static_cast<double>(s) / lambda_steps;
                    for (std::size_t v = 0; v < v_count; ++v) {
                        mixture[v] =
                            l * matrix.at(cands[a], v) + (1.0 - l) * matrix.at(cands[b], v);
                    }
                    found = beats_everywhere(mixture, target_row);
                }
            }
        }
        if (!found && cands.size() >= 3 && cands.size() <= 16) {
            constexpr std::size_t kTripleSteps = 20;
            for (std::size_t a = 0; a < cands.size() && !found; ++a) {
                for (std::size_t b = a + 1; b < cands.size() && !found; ++b) {
                    for (std::size_t c = b + 1; c < cands.size() && !found; ++c) {
                        for (std::size_t sa = 0; sa <= kTripleSteps && !found; ++sa) {
                            for (std::size_t sb = 0; sb + sa <= kTripleSteps && !found; ++sb) {
                                const double la = static_cast<double>(sa) / kTripleSteps;
                                const double lb = static_cast<double>(sb) / kTripleSteps;
                                const double lc = 1.0 - la - lb;
                                for (std::size_t v = 0; v < v_count; ++v) {
                                    mixture[v] = la * matrix.at(cands[a], v) +
                                                 lb * matrix.at(cands[b], v) +
                                                 lc * matrix.at(cands[c], v);
                                }
                                found = beats_everywhere(mixture, target_row);
                            }
                        }
                    }
                }
            }
        }
        if (found) {
            is_certified_not_po[ti] = 1;
        }
    }

    for (std::size_t i = 0; i < nd_ids.size(); ++i) {
        if (is_certified_po[i] && is_certified_not_po[i]) {
            throw NumericError("po_grid certified '" + nd_ids[i] +
                               "' both ways; margins are inconsistent");
        }
        if (is_certified_po[i]) {
            cert.certified_po.push_back(nd_ids[i]);
        } else if (is_certified_not_po[i]) {
            cert.certified_not_po.push_back(nd_ids[i]);
        } else {
            cert.undecided.push_back(nd_ids[i]);
        }
    }
    return cert;
}

}  // namespace fskyline::oracle
