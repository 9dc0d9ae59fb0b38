#include <doctest.h>

#include <cmath>
#include <vector>

#include "fskyline/errors.hpp"
#include "fskyline/poisson.hpp"
#include "support/poisson_reference.hpp"

using namespace fskyline;

namespace {

const double kE1 = std::exp(-1.0);

std::vector<double> lambda_grid() { return {0.0, 0.5, 1.0, 5.0, 10.0, 25.0, 50.0, 100.0}; }

long long k_ceiling(double lambda) {
    return static_cast<long long>(std::ceil(lambda + 10.0 * std::sqrt(lambda))) + 5;
}

// Regularized upper incomplete gamma Q(a, x) by adaptive-step Simpson
// quadrature on exp((a-1) ln t - t - lgamma(a)). Independent route for the
// identity cdf(lambda, K) = Q(K+1, lambda).
double reg_upper_gamma_quadrature(double a, double x) {
    const auto integrand = [a](double t) {
        if (t <= 0.0) {
            return a > 1.0 ? 0.0 : (a == 1.0 ? std::exp(-std::lgamma(a)) : 0.0);
        }
        return std::exp((a - 1.0) * std::log(t) - t - std::lgamma(a));
    };
    const double hi = std::max(x, a) + 60.0 * std::sqrt(a) + 60.0;
    const int slices = 200000;
    const double h = (hi - x) / slices;
    double acc = integrand(x) + integrand(hi);
    for (int i = 1; i < slices; ++i) {
        acc += integrand(x + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("pmf closed-form and degenerate cases") {
    CHECK(pmf({1.0}, 0) == doctest::Approx(kE1).epsilon(1e-15));
    CHECK(pmf({0.0}, 0) == 1.0);
    CHECK(pmf({0.0}, 1) == 0.0);
    CHECK(pmf({0.0}, 7) == 0.0);
    // frozen from the long-double reference oracle
    CHECK(pmf({10.0}, 10) == doctest::Approx(0.12511003572113330).epsilon(1e-13));
}

TEST_CASE("pmf agrees with the reference across the grid, both evaluation paths") {
    for (double lambda : lambda_grid()) {
        for (long long k = 0; k <= k_ceiling(lambda); ++k) {
            CHECK(std::fabs(pmf({lambda}, k) - poisson_ref::pmf(lambda, k)) <= 1e-13);
        }
    }
    // log-space path k > 30 at small lambda
    CHECK(std::fabs(pmf({2.0}, 40) - poisson_ref::pmf(2.0, 40)) <= 1e-14);
}

TEST_CASE("cdf values") {
    CHECK(cdf({0.0}, 0.0) == 1.0);
    CHECK(cdf({0.0}, 3.7) == 1.0);
    CHECK(cdf({1.0}, 0.0) == doctest::Approx(kE1).epsilon(1e-15));
    // frozen: sum of mass terms j = 0..8 at lambda 10
    CHECK(cdf({10.0}, 8.0) == doctest::Approx(0.33281967875071891).epsilon(1e-13));
    // floor semantics: any K in [8, 9) evaluates at 8
    CHECK(cdf({10.0}, 8.0) == cdf({10.0}, 8.999));
}

TEST_CASE("cdf matches the reference within 1e-12 over the acceptance grid") {
    for (double lambda : lambda_grid()) {
        for (long long k = 0; k <= k_ceiling(lambda); ++k) {
            CHECK(std::fabs(cdf({lambda}, static_cast<double>(k)) -
                            poisson_ref::cdf(lambda, k)) <= 1e-12);
        }
    }
}

TEST_CASE("cdf equals the regularized incomplete gamma (identity checked, not used)") {
    for (double lambda : {1.0, 5.0, 10.0, 25.0}) {
        for (long long k : {0LL, 1LL, 3LL, 8LL, 20LL}) {
            const double q = reg_upper_gamma_quadrature(static_cast<double>(k) + 1.0, lambda);
            CHECK(std::fabs(cdf({lambda}, static_cast<double>(k)) - q) <= 1e-9);
        }
    }
}

TEST_CASE("survival values and complement identity") {
    CHECK(survival({1.0}, 0.0) == doctest::Approx(1.0 - kE1).epsilon(1e-15));
    CHECK(survival({0.0}, 0.0) == 0.0);
    CHECK(survival({10.0}, 8.0) == doctest::Approx(0.66718032124928109).epsilon(1e-13));
    for (double lambda : lambda_grid()) {
        for (long long k = 0; k <= k_ceiling(lambda); ++k) {
            const double kk = static_cast<double>(k);
            CHECK(std::fabs(cdf({lambda}, kk) + survival({lambda}, kk) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("survival keeps relative precision deep in the upper tail") {
    // cdf is ~1 here; the direct tail sum must track the reference closely
    const double s = survival({10.0}, 40.0);
    const double ref = poisson_ref::survival(10.0, 40);
    CHECK(ref < 1e-12);
    CHECK(std::fabs(s - ref) <= 1e-3 * ref);
}

TEST_CASE("cdf monotone non-decreasing in K") {
    for (double lambda : lambda_grid()) {
        double prev = -1.0;
        for (long long k = 0; k <= k_ceiling(lambda); ++k) {
            const double c = cdf({lambda}, static_cast<double>(k));
            CHECK(c >= prev);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            prev = c;
        }
    }
}

TEST_CASE("survival monotone non-decreasing in lambda") {
    const auto grid = lambda_grid();
    for (double k : {0.0, 1.0, 5.0, 10.0, 30.0}) {
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            CHECK(survival({grid[i]}, k) <= survival({grid[i + 1]}, k) + 1e-15);
        }
    }
}

TEST_CASE("partial sums of the mass function never exceed 1 + 1e-12") {
    for (double lambda : {0.5, 1.0, 10.0, 50.0, 100.0}) {
        double term = std::exp(-lambda);
        double sum = term;
        for (long long j = 1; j <= k_ceiling(lambda) + 100; ++j) {
            term *= lambda / static_cast<double>(j);
            sum += term;
            CHECK(sum <= 1.0 + 1e-12);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cdf increments flatten far above the mean") {
    for (double lambda : {1.0, 10.0, 50.0}) {
        const double far = lambda + 10.0 * std::sqrt(lambda) + 10.0;
        const double inc = cdf({lambda}, far + 1.0) - cdf({lambda}, far);
        CHECK(inc >= 0.0);
        CHECK(inc <= 1e-12);
    }
}

TEST_CASE("quantile basics") {
    CHECK(quantile({5.0}, 0.0) == 0);
    CHECK(quantile({0.0}, 0.99) == 0);
    // frozen: cdf(10, 9) = 0.4579... < 0.5 <= cdf(10, 10) = 0.5830...
    CHECK(quantile({10.0}, 0.5) == 10);
    CHECK(quantile({10.0}, 0.5) == poisson_ref::quantile(10.0, 0.5));
}

TEST_CASE("quantile is the discrete inverse: quantile(cdf(K)) <= K") {
    for (double lambda : {0.5, 1.0, 5.0, 10.0, 25.0, 50.0}) {
        for (long long k = 0; k <= k_ceiling(lambda); ++k) {
            const double p = cdf({lambda}, static_cast<double>(k));
            if (p < 1.0) {
                CHECK(quantile({lambda}, p) <= k);
            }
        }
    }
}

TEST_CASE("quantile agrees with the reference on a probability grid") {
    for (double lambda : {0.5, 1.0, 5.0, 10.0, 50.0}) {
        for (double p : {0.0, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.9999}) {
            CHECK(quantile({lambda}, p) == poisson_ref::quantile(lambda, p));
        }
    }
}

TEST_CASE("two_sigma_band") {
    const Band b25 = two_sigma_band({25.0});
    CHECK(b25.lo == 15.0);
    CHECK(b25.hi == 35.0);
    const Band b0 = two_sigma_band({0.0});
    CHECK(b0.lo == 0.0);
    CHECK(b0.hi == 0.0);
    const Band b10 = two_sigma_band({10.0});
    CHECK(b10.lo == doctest::Approx(10.0 - 2.0 * std::sqrt(10.0)));
    CHECK(b10.hi == doctest::Approx(10.0 + 2.0 * std::sqrt(10.0)));
    NumericsConfig three;
    three.band_multiplier = 3.0;
    const Band b25w = two_sigma_band({25.0}, three);
    CHECK(b25w.lo == 10.0);
    CHECK(b25w.hi == 40.0);
}

TEST_CASE("clamped survival substitutes asymptotic limits outside the band") {
    NumericsConfig cfg;
    cfg.clamp_enabled = true;
    CHECK(clamped_survival({25.0}, 40.0, cfg) == 0.0);
    CHECK(clamped_survival({25.0}, 10.0, cfg) == 1.0);
    // in-band values are never approximated (bitwise equality)
    CHECK(clamped_survival({25.0}, 25.0, cfg) == survival({25.0}, 25.0));
    CHECK(clamped_survival({25.0}, 15.0, cfg) == survival({25.0}, 15.0));
    CHECK(clamped_survival({25.0}, 35.0, cfg) == survival({25.0}, 35.0));
    // degenerate rate: the clamp is exact everywhere
    CHECK(clamped_survival({0.0}, 0.0, cfg) == 0.0);
    CHECK(clamped_survival({0.0}, 2.0, cfg) == 0.0);
}

TEST_CASE("clamped cdf mirrors the survival limits") {
    NumericsConfig cfg;
    cfg.clamp_enabled = true;
    CHECK(clamped_cdf({25.0}, 10.0, cfg) == 0.0);
    CHECK(clamped_cdf({25.0}, 40.0, cfg) == 1.0);
    CHECK(clamped_cdf({25.0}, 25.0, cfg) == cdf({25.0}, 25.0));
}

TEST_CASE("clamp error equals the out-of-band tail mass and stays below 0.05") {
    NumericsConfig cfg;
    cfg.clamp_enabled = true;
    for (double lambda : {25.0, 50.0, 100.0}) {
        const Band band = two_sigma_band({lambda}, cfg);
        double max_err = 0.0;
        for (long long k = 0; k <= k_ceiling(lambda); ++k) {
            const double kk = static_cast<double>(k);
            const double err =
                std::fabs(clamped_survival({lambda}, kk, cfg) - survival({lambda}, kk));
            if (kk >= band.lo && kk <= band.hi) {
                CHECK(err == 0.0);
            } else if (kk > band.hi) {
                // clamp says 0; the full error is exactly the tail mass
                CHECK(err == doctest::Approx(poisson_ref::survival(lambda, k)).epsilon(1e-12));
            } else {
                CHECK(err == doctest::Approx(poisson_ref::cdf(lambda, k)).epsilon(1e-12));
            }
            max_err = std::max(max_err, err);
        }
        CHECK(max_err <= 0.05);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(pmf({-1.0}, 0), std::domain_error);
    CHECK_THROWS_AS(pmf({1.0}, -1), std::domain_error);
    CHECK_THROWS_AS(pmf({std::numeric_limits<double>::infinity()}, 0), std::domain_error);
    CHECK_THROWS_AS(cdf({1.0}, -0.5), std::domain_error);
    CHECK_THROWS_AS(cdf({std::nan("")}, 1.0), std::domain_error);
    CHECK_THROWS_AS(survival({1.0}, -1.0), std::domain_error);
    CHECK_THROWS_AS(quantile({1.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(quantile({1.0}, -0.1), std::domain_error);
    NumericsConfig no_clamp;
    CHECK_THROWS_AS(clamped_survival({1.0}, 1.0, no_clamp), std::domain_error);
    CHECK_THROWS_AS(clamped_cdf({1.0}, 1.0, no_clamp), std::domain_error);
    NumericsConfig bad_band;
    bad_band.band_multiplier = 0.0;
    CHECK_THROWS_AS(two_sigma_band({1.0}, bad_band), std::domain_error);
    NumericsConfig low_clamp;
    low_clamp.quantile_upper_clamp = 0.5;
    CHECK_THROWS_AS(quantile({10.0}, 0.5, low_clamp), std::domain_error);
}

TEST_CASE("quantile search failure past a tight clamp is loud") {
    NumericsConfig tight;
    tight.quantile_upper_clamp = 100.0;  // >= lambda, far below the needed K
    CHECK_THROWS_AS(quantile({100.0}, 0.99999999, tight), NumericError);
}
