#include "fskyline/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fskyline/errors.hpp"

namespace fskyline::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotEps = 1e-11;
constexpr std::size_t kMaxIterations = 20000;

// Dense tableau over standard form: min c.y, A y = b, y >= 0, b >= 0.
struct Tableau {
    std::size_t rows = 0;
    std::size_t cols = 0;                // structural + artificial columns
    std::vector<double> a;               // rows x cols
    std::vector<double> rhs;             // rows
    std::vector<double> cost;            // reduced-cost row
    double cost_rhs = 0.0;               // negative of current objective value
    std::vector<std::size_t> basis;      // per row
    std::vector<char> banned;            // columns barred from entering

    double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

void pivot(Tableau& t, std::size_t prow, std::size_t pcol) {
    const double denom = t.at(prow, pcol);
    for (std::size_t c = 0; c < t.cols; ++c) {
        t.at(prow, c) /= denom;
    }
    t.rhs[prow] /= denom;
    for (std::size_t r = 0; r < t.rows; ++r) {
        if (r == prow) {
            continue;
        }
        const double factor = t.at(r, pcol);
        if (factor == 0.0) {
            continue;
        }
        for (std::size_t c = 0; c < t.cols; ++c) {
            t.at(r, c) -= factor * t.at(prow, c);
        }
        t.rhs[r] -= factor * t.rhs[prow];
    }
    const double cfactor = t.cost[pcol];
    if (cfactor != 0.0) {
        for (std::size_t c = 0; c < t.cols; ++c) {
            t.cost[c] -= cfactor * t.at(prow, c);
        }
        t.cost_rhs -= cfactor * t.rhs[prow];
    }
    t.basis[prow] = pcol;
}

enum class SimplexEnd { optimal, unbounded };

SimplexEnd run_simplex(Tableau& t) {
    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
        // Bland: lowest-index column with negative reduced cost.
        std::size_t enter = t.cols;
        for (std::size_t c = 0; c < t.cols; ++c) {
            if (!t.banned[c] && t.cost[c] < -kPivotEps) {
                enter = c;
                break;
            }
        }
        if (enter == t.cols) {
            return SimplexEnd::optimal;
        }
        // Ratio test; ties resolved by lowest basis-variable index.
        std::size_t leave = t.rows;
        double best = kInf;
        for (std::size_t r = 0; r < t.rows; ++r) {
            const double arc = t.at(r, enter);
            if (arc > kPivotEps) {
                const double ratio = t.rhs[r] / arc;
                if (ratio < best - kPivotEps ||
                    (ratio < best + kPivotEps &&
                     (leave == t.rows || t.basis[r] < t.basis[leave]))) {
                    best = ratio;
                    leave = r;
                }
            }
        }
        if (leave == t.rows) {
            return SimplexEnd::unbounded;
        }
        pivot(t, leave, enter);
    }
    throw NumericError("simplex exceeded its iteration cap (" +
                       std::to_string(kMaxIterations) + ")");
}

// Mapping from an original variable to its standard-form column(s).
struct VarMap {
    std::size_t col = 0;
    bool split = false;  // free variable encoded as plus-minus pair
    double shift = 0.0;  // finite lower bound folded into the column
};

}  // namespace

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

LpOutcome solve(const LinearProgram& lp) {
    const std::size_t n = lp.objective.size();
    if (n == 0) {
        throw DataError("linear program has no variables");
    }
    std::vector<double> lower = lp.lower.empty() ? std::vector<double>(n, 0.0) : lp.lower;
    std::vector<double> upper = lp.upper.empty() ? std::vector<double>(n, kInf) : lp.upper;
    if (lower.size() != n || upper.size() != n) {
        throw DataError("variable bound vectors do not match objective dimension");
    }
    for (const auto& row : lp.constraints) {
        if (row.coeffs.size() != n) {
            throw DataError("constraint row dimension mismatch");
        }
    }

    // Standard-form columns: shifted originals, free splits, then later
    // slack/surplus columns.
    std::vector<VarMap> vmap(n);
    std::size_t ncols = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isfinite(lower[j])) {
            vmap[j] = VarMap{ncols, false, lower[j]};
            ncols += 1;
        } else {
            vmap[j] = VarMap{ncols, true, 0.0};
            ncols += 2;
        }
    }

    // Rows: user rows, plus one upper-bound row per finitely-bounded var.
    struct StdRow {
        std::vector<double> coeffs;
        double rhs = 0.0;
        ConstraintSense sense = ConstraintSense::less_equal;
    };
    std::vector<StdRow> rows;
    rows.reserve(lp.constraints.size() + n);
    auto expand = [&](const std::vector<double>& orig) {
        std::vector<double> out(ncols, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            out[vmap[j].col] = orig[j];
            if (vmap[j].split) {
                out[vmap[j].col + 1] = -orig[j];
            }
        }
        return out;
    };
    for (const auto& row : lp.constraints) {
        double shift_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            shift_sum += row.coeffs[j] * vmap[j].shift;
        }
        rows.push_back(StdRow{expand(row.coeffs), row.bound - shift_sum, row.sense});
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (std::isfinite(upper[j])) {
            if (upper[j] < lower[j]) {
                return LpOutcome{LpStatus::infeasible, 0.0, {}};
            }
            std::vector<double> coeffs(ncols, 0.0);
            coeffs[vmap[j].col] = 1.0;
            if (vmap[j].split) {
                coeffs[vmap[j].col + 1] = -1.0;
            }
            rows.push_back(StdRow{std::move(coeffs), upper[j] - vmap[j].shift,
                                  ConstraintSense::less_equal});
        }
    }

    // Slack / surplus columns, then sign-normalize the right-hand sides.
    const std::size_t m = rows.size();
    std::size_t nslack = 0;
    for (const auto& row : rows) {
        if (row.sense != ConstraintSense::equal) {
            ++nslack;
        }
    }
    const std::size_t nstruct = ncols + nslack;
    const std::size_t total = nstruct + m;  // + artificials

    Tableau t;
    t.rows = m;
    t.cols = total;
    t.a.assign(m * total, 0.0);
    t.rhs.assign(m, 0.0);
    t.cost.assign(total, 0.0);
    t.basis.assign(m, 0);
    t.banned.assign(total, 0);

    std::size_t slack_at = ncols;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < ncols; ++c) {
            t.at(r, c) = rows[r].coeffs[c];
        }
        if (rows[r].sense == ConstraintSense::less_equal) {
            t.at(r, slack_at++) = 1.0;
        } else if (rows[r].sense == ConstraintSense::greater_equal) {
            t.at(r, slack_at++) = -1.0;
        }
        t.rhs[r] = rows[r].rhs;
        if (t.rhs[r] < 0.0) {
            for (std::size_t c = 0; c < nstruct; ++c) {
                t.at(r, c) = -t.at(r, c);
            }
            t.rhs[r] = -t.rhs[r];
        }
        t.at(r, nstruct + r) = 1.0;  // artificial
        t.basis[r] = nstruct + r;
    }

    // Phase 1: minimize the artificial sum. Reduced costs relative to the
    // all-artificial basis.
    for (std::size_t c = 0; c < nstruct; ++c) {
        double colsum = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            colsum += t.at(r, c);
        }
        t.cost[c] = -colsum;
    }
    t.cost_rhs = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        t.cost_rhs -= t.rhs[r];
    }
    if (run_simplex(t) == SimplexEnd::unbounded) {
        throw NumericError("phase-1 simplex reported unbounded; malformed tableau");
    }
    const double phase1 = -t.cost_rhs;
    if (phase1 > lp.tolerance) {
        return LpOutcome{LpStatus::infeasible, 0.0, {}};
    }

    // Drive artificials out of the basis where possible; ban them all.
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] >= nstruct) {
            std::size_t swap_col = total;
            for (std::size_t c = 0; c < nstruct; ++c) {
                if (std::fabs(t.at(r, c)) > kPivotEps) {
                    swap_col = c;
                    break;
                }
            }
            if (swap_col != total) {
                pivot(t, r, swap_col);
            }
            // else: redundant row; the artificial stays basic at zero.
        }
    }
    for (std::size_t c = nstruct; c < total; ++c) {
        t.banned[c] = 1;
    }

    // Phase 2: real costs over the current basis.
    std::vector<double> std_cost(total, 0.0);
    double const_term = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std_cost[vmap[j].col] += lp.objective[j];
        if (vmap[j].split) {
            std_cost[vmap[j].col + 1] -= lp.objective[j];
        }
        const_term += lp.objective[j] * vmap[j].shift;
    }
    t.cost = std_cost;
    t.cost_rhs = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double cb = std_cost[t.basis[r]];
        if (cb != 0.0) {
            for (std::size_t c = 0; c < total; ++c) {
                t.cost[c] -= cb * t.at(r, c);
            }
            t.cost_rhs -= cb * t.rhs[r];
        }
    }
    if (run_simplex(t) == SimplexEnd::unbounded) {
        return LpOutcome{LpStatus::unbounded, -kInf, {}};
    }

    // Recover the original-space point.
    std::vector<double> std_point(total, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        std_point[t.basis[r]] = t.rhs[r];
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double v = std_point[vmap[j].col];
        if (vmap[j].split) {
            v -= std_point[vmap[j].col + 1];
        }
        x[j] = v + vmap[j].shift;
    }
    double value = -t.cost_rhs + const_term;

    // Certify before reporting: the point must satisfy every row and bound
    // and reproduce the objective value.
    const double tol = std::max(lp.tolerance, 1e-12);
    double recomputed = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        recomputed += lp.objective[j] * x[j];
        if (x[j] < lower[j] - tol || x[j] > upper[j] + tol) {
            throw NumericError("simplex produced a point outside its variable bounds");
        }
    }
    if (std::fabs(recomputed - value) > tol * std::max(1.0, std::fabs(value))) {
        throw NumericError("simplex objective value does not certify");
    }
    for (const auto& row : lp.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            lhs += row.coeffs[j] * x[j];
        }
        const bool ok = row.sense == ConstraintSense::less_equal  ? lhs <= row.bound + tol
                        : row.sense == ConstraintSense::greater_equal ? lhs >= row.bound - tol
                        : std::fabs(lhs - row.bound) <= tol;
        if (!ok) {
            throw NumericError("simplex produced an infeasible optimal point");
        }
    }
    return LpOutcome{LpStatus::optimal, value, std::move(x)};
}

ConvexDominanceResult convex_combination_dominates(const ScoreMatrix& scores,
                                                   const std::vector<std::string>& candidates,
                                                   const std::string& target,
                                                   double tolerance_strict) {
    ConvexDominanceResult result;
    if (candidates.empty()) {
        return result;
    }
    const std::size_t trow = scores.row_of(target);
    std::vector<std::size_t> crows;
    crows.reserve(candidates.size());
    for (const auto& id : candidates) {
        if (id == target) {
            throw DataError("convex dominance target '" + target +
                            "' must not appear among the candidates");
        }
        crows.push_back(scores.row_of(id));
    }

    const std::size_t m = candidates.size();
    const std::size_t v_count = scores.vertex_count();

    // Variables: lambda_0..lambda_{m-1} >= 0, then free delta.
    LinearProgram lp;
    lp.objective.assign(m + 1, 0.0);
    lp.objective[m] = 1.0;
    lp.lower.assign(m + 1, 0.0);
    lp.lower[m] = -kInf;
    lp.upper.assign(m + 1, kInf);
    lp.tolerance = std::min(tolerance_strict, 1e-9);

    LinearConstraint sum_row;
    sum_row.coeffs.assign(m + 1, 1.0);
    sum_row.coeffs[m] = 0.0;
    sum_row.sense = ConstraintSense::equal;
    sum_row.bound = 1.0;
    lp.constraints.push_back(std::move(sum_row));

    for (std::size_t v = 0; v < v_count; ++v) {
        LinearConstraint row;
        row.coeffs.assign(m + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            row.coeffs[j] = scores.at(crows[j], v);
        }
        row.coeffs[m] = -1.0;
        row.sense = ConstraintSense::less_equal;
        row.bound = scores.at(trow, v);
        lp.constraints.push_back(std::move(row));
    }

    const LpOutcome outcome = solve(lp);
    if (outcome.status != LpStatus::optimal) {
        throw NumericError(std::string("convex dominance LP ended ") +
                           to_string(outcome.status) + "; expected optimal");
    }
    result.delta = outcome.value;

    // Witness mixture re-checked by direct arithmetic against the matrix.
    std::vector<double> mixture(v_count, 0.0);
    for (std::size_t v = 0; v < v_count; ++v) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += outcome.point[j] * scores.at(crows[j], v);
        }
        mixture[v] = acc;
    }
    bool no_vertex_above = true;
    bool some_vertex_below = false;
    for (std::size_t v = 0; v < v_count; ++v) {
        const double gap = mixture[v] - scores.at(trow, v);
        if (gap > tolerance_strict) {
            no_vertex_above = false;
        }
        if (gap < -tolerance_strict) {
            some_vertex_below = true;
        }
    }
    const bool strict_everywhere = result.delta < -tolerance_strict;
    const bool tie_with_strict_vertex =
        result.delta <= tolerance_strict && no_vertex_above && some_vertex_below;
    if (strict_everywhere || tie_with_strict_vertex) {
        result.dominated = true;
        for (std::size_t j = 0; j < m; ++j) {
            if (outcome.point[j] > 1e-12) {
                result.witness_ids.push_back(candidates[j]);
                result.witness_lambdas.push_back(outcome.point[j]);
            }
        }
        double total = 0.0;
        for (double l : result.witness_lambdas) {
            total += l;
        }
        for (double& l : result.witness_lambdas) {
            l /= total;
        }
    }
    return result;
}

}  // namespace fskyline::lp
