#include "fskyline/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fskyline/errors.hpp"

namespace fskyline {
namespace {

// Above this, lambda^k and k! overflow doubles fast; switch to log space.
constexpr double kLogSpaceThreshold = 30.0;

void check_params(const PoissonParams& params) {
    if (!std::isfinite(params.lambda) || params.lambda < 0.0) {
        throw std::domain_error("Poisson rate must be finite and >= 0, got " +
                                std::to_string(params.lambda));
    }
}

void check_threshold(double k) {
    if (!std::isfinite(k) || k < 0.0) {
        throw std::domain_error("Poisson count threshold must be finite and >= 0, got " +
                                std::to_string(k));
    }
}

double log_mass(double lambda, long long k) {
    return static_cast<double>(k) * std::log(lambda) - lambda -
           std::lgamma(static_cast<double>(k) + 1.0);
}

// Ascending sum of mass terms j = 0..k_max. quantile() replays exactly this
// accumulation so the discrete inverse stays consistent with cdf().
double lower_sum(double lambda, long long k_max) {
    if (lambda == 0.0) {
        return 1.0;
    }
    double sum = 0.0;
    if (lambda > kLogSpaceThreshold) {
        for (long long j = 0; j <= k_max; ++j) {
            sum += std::exp(log_mass(lambda, j));
        }
    } else {
        double term = std::exp(-lambda);
        sum = term;
        for (long long j = 1; j <= k_max; ++j) {
            term *= lambda / static_cast<double>(j);
            sum += term;
        }
    }
    return std::min(sum, 1.0);
}

// Tail sum P(X > k): terms from k+1 upward until they stop mattering.
double upper_sum(double lambda, long long k, double tolerance) {
    const long long start = k + 1;
    const double sd = std::sqrt(lambda);
    const long long cap = static_cast<long long>(
        std::ceil(std::max(static_cast<double>(start), lambda) + 60.0 * sd + 60.0));

    double sum = 0.0;
    double term = std::exp(log_mass(lambda, start));
    for (long long j = start;; ++j) {
        sum += term;
        if (j >= cap) {
            break;
        }
        if (static_cast<double>(j) > lambda && term <= tolerance * sum) {
            break;
        }
        term *= lambda / static_cast<double>(j + 1);
    }
    return std::min(sum, 1.0);
}

}  // namespace

double pmf(const PoissonParams& params, long long k) {
    check_params(params);
    if (k < 0) {
        throw std::domain_error("Poisson pmf requires k >= 0, got " + std::to_string(k));
    }
    const double lambda = params.lambda;
    if (lambda == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    if (lambda > kLogSpaceThreshold || k > static_cast<long long>(kLogSpaceThreshold)) {
        return std::exp(log_mass(lambda, k));
    }
    double term = std::exp(-lambda);
    for (long long j = 1; j <= k; ++j) {
        term *= lambda / static_cast<double>(j);
    }
    return term;
}

double cdf(const PoissonParams& params, double k) {
    check_params(params);
    check_threshold(k);
    return lower_sum(params.lambda, static_cast<long long>(std::floor(k)));
}

double survival(const PoissonParams& params, double k, const NumericsConfig& config) {
    check_params(params);
    check_threshold(k);
    const double lambda = params.lambda;
    if (lambda == 0.0) {
        return 0.0;
    }
    const long long kk = static_cast<long long>(std::floor(k));
    const double lower = lower_sum(lambda, kk);
    if (lower <= 0.5) {
        return 1.0 - lower;
    }
    return upper_sum(lambda, kk, config.summation_tolerance);
}

long long quantile(const PoissonParams& params, double p, const NumericsConfig& config) {
    check_params(params);
    if (!std::isfinite(p) || p < 0.0 || p >= 1.0) {
        throw std::domain_error("Poisson quantile requires 0 <= p < 1, got " + std::to_string(p));
    }
    const double lambda = params.lambda;
    if (lambda == 0.0) {
        return 0;
    }
    const double cap =
        config.quantile_upper_clamp.value_or(lambda + 10.0 * std::sqrt(lambda) + 10.0);
    if (cap < lambda) {
        throw std::domain_error("quantile_upper_clamp must be >= lambda");
    }
    const long long k_cap = static_cast<long long>(std::ceil(cap));

    if (lambda > kLogSpaceThreshold) {
        double sum = 0.0;
        for (long long j = 0; j <= k_cap; ++j) {
            sum += std::exp(log_mass(lambda, j));
            if (std::min(sum, 1.0) >= p) {
                return j;
            }
        }
    } else {
        double term = std::exp(-lambda);
        double sum = term;
        if (std::min(sum, 1.0) >= p) {
            return 0;
        }
        for (long long j = 1; j <= k_cap; ++j) {
            term *= lambda / static_cast<double>(j);
            sum += term;
            if (std::min(sum, 1.0) >= p) {
                return j;
            }
        }
    }
    throw NumericError("Poisson quantile search for p=" + std::to_string(p) +
                       " exceeded its upper clamp " + std::to_string(cap));
}

Band two_sigma_band(const PoissonParams& params, const NumericsConfig& config) {
    check_params(params);
    if (!(config.band_multiplier > 0.0)) {
        throw std::domain_error("band_multiplier must be > 0");
    }
    const double spread = config.band_multiplier * std::sqrt(params.lambda);
    return Band{std::max(0.0, params.lambda - spread), params.lambda + spread};
}

double clamped_survival(const PoissonParams& params, double k, const NumericsConfig& config) {
    if (!config.clamp_enabled) {
        throw std::domain_error("clamped_survival requires clamp_enabled");
    }
    check_params(params);
    check_threshold(k);
    const Band band = two_sigma_band(params, config);
    if (k < band.lo) {
        return 1.0;  // nearly all mass sits above the threshold
    }
    if (k > band.hi) {
        return 0.0;
    }
    return survival(params, k, config);
}

double clamped_cdf(const PoissonParams& params, double k, const NumericsConfig& config) {
    if (!config.clamp_enabled) {
        throw std::domain_error("clamped_cdf requires clamp_enabled");
    }
    check_params(params);
    check_threshold(k);
    const Band band = two_sigma_band(params, config);
    if (k < band.lo) {
        return 0.0;
    }
    if (k > band.hi) {
        return 1.0;
    }
    return cdf(params, k);
}

}  // namespace fskyline
