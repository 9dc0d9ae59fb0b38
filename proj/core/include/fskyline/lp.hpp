#ifndef FSKYLINE_LP_HPP
#define FSKYLINE_LP_HPP

#include <string>
#include <vector>

#include "fskyline/scoring.hpp"

namespace fskyline::lp {

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

/// Minimize objective . x subject to general linear rows and per-variable
/// bounds. Bounds may be +/-infinity. Small dense problems only.
struct LinearProgram {
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower;  // defaults to 0 when empty
    std::vector<double> upper;  // defaults to +inf when empty
    double tolerance = 1e-9;
};

struct LpOutcome {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> point;
};

/// Two-phase dense simplex with Bland's rule (lowest-index tie breaking, so
/// identical inputs always pivot identically). Optimal outcomes are
/// re-substituted before returning; a violated certificate raises
/// NumericError rather than being reported as optimal.
LpOutcome solve(const LinearProgram& lp);

struct ConvexDominanceResult {
    bool dominated = false;
    /// Witness mixture over the candidate set, recorded only when dominated.
    std::vector<std::string> witness_ids;
    std::vector<double> witness_lambdas;
    /// Optimal uniform slack: max over vertices of (mixture - target) at the
    /// minimizing mixture. Negative means some mixture beats the target at
    /// every vertex.
    double delta = 0.0;
};

/// Potential-optimality test: is the target's score row F-dominated by some
/// convex combination of the candidates' rows? Solves
///   minimize delta  s.t.  lambda >= 0, sum(lambda) = 1,
///                         mixture[v] <= target[v] + delta  for every vertex
/// and reports domination when delta* < -tolerance_strict, or when the
/// optimal mixture ties within tolerance while sitting strictly below the
/// target at one or more vertices and above it at none.
ConvexDominanceResult convex_combination_dominates(const ScoreMatrix& scores,
                                                   const std::vector<std::string>& candidates,
                                                   const std::string& target,
                                                   double tolerance_strict = 1e-9);

}  // namespace fskyline::lp

#endif  // FSKYLINE_LP_HPP
