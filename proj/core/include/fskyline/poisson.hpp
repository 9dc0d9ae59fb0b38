#ifndef FSKYLINE_POISSON_HPP
#define FSKYLINE_POISSON_HPP

#include <optional>

namespace fskyline {

/// Parameters of a Poisson distribution: the constant mean rate of the
/// underlying process. The rate is both the mean and the variance of the
/// occurrence count, so one stored attribute fully determines the model.
struct PoissonParams {
    double lambda = 0.0;  // >= 0, finite
};

/// Closed interval [lo, hi].
struct Band {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Knobs for the numeric evaluation paths. Defaults match the engine's
/// stock behavior: exact evaluation everywhere, clamping opt-in.
struct NumericsConfig {
    /// Width of the kept-exact band around the mean, in standard deviations.
    double band_multiplier = 2.0;
    /// When set, the clamped_* evaluators are allowed and the scoring layer
    /// substitutes asymptotic limits for far-out-of-band thresholds.
    bool clamp_enabled = false;
    /// Upper bound for the quantile search. Unset means
    /// lambda + 10*sqrt(lambda) + 10, which covers every p < 1.
    std::optional<double> quantile_upper_clamp;
    /// Relative cutoff for tail summation.
    double summation_tolerance = 1e-15;
};

/// P(X = k) for X ~ Po(lambda). Exact multiplicative recurrence for small
/// cases, log-gamma in log space once lambda or k exceeds 30.
double pmf(const PoissonParams& params, long long k);

/// P(X <= floor(k)): ascending sum of mass terms, clamped to [0, 1].
/// Non-integer thresholds evaluate at their floor (a count threshold is a
/// step function).
double cdf(const PoissonParams& params, double k);

/// P(X > floor(k)). Computed as the complement when the lower sum is small,
/// and by summing the tail directly once cdf > 0.5 so relative precision of
/// small survival values is preserved.
double survival(const PoissonParams& params, double k, const NumericsConfig& config = {});

/// Smallest integer K with cdf(K) >= p, for 0 <= p < 1. The search is capped
/// at config.quantile_upper_clamp and throws NumericError beyond it.
long long quantile(const PoissonParams& params, double p, const NumericsConfig& config = {});

/// [max(0, lambda - m*sqrt(lambda)), lambda + m*sqrt(lambda)] with
/// m = config.band_multiplier. Outside this band the mass terms are
/// negligible and the clamped evaluators substitute asymptotic limits.
Band two_sigma_band(const PoissonParams& params, const NumericsConfig& config = {});

/// Survival with the out-of-band fast path: thresholds below the band return
/// 1, above it 0, and in-band values are always computed exactly. Requires
/// config.clamp_enabled.
double clamped_survival(const PoissonParams& params, double k, const NumericsConfig& config);

/// CDF-form counterpart of clamped_survival with mirrored limits:
/// below the band 0, above it 1.
double clamped_cdf(const PoissonParams& params, double k, const NumericsConfig& config);

}  // namespace fskyline

#endif  // FSKYLINE_POISSON_HPP
