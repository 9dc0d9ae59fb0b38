#ifndef FSKYLINE_TESTS_POISSON_REFERENCE_HPP
#define FSKYLINE_TESTS_POISSON_REFERENCE_HPP

#include <cmath>
#include <stdexcept>

// Reference Poisson sums used to freeze expected values and cross-check the
// library: long-double mass terms through lgammal, Neumaier-compensated
// accumulation. Deliberately a different route from the library's
// double-precision recurrence.
namespace poisson_ref {

inline long double mass(long double lambda, long long k) {
    if (lambda == 0.0L) {
        return k == 0 ? 1.0L : 0.0L;
    }
    return expl(static_cast<long double>(k) * logl(lambda) - lambda -
                lgammal(static_cast<long double>(k) + 1.0L));
}

struct NeumaierSum {
    long double sum = 0.0L;
    long double compensation = 0.0L;

    void add(long double v) {
        const long double t = sum + v;
        if (fabsl(sum) >= fabsl(v)) {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    long double value() const { return sum + compensation; }
};

inline double pmf(double lambda, long long k) {
    return static_cast<double>(mass(lambda, k));
}

inline double cdf(double lambda, long long k) {
    if (k < 0) {
        return 0.0;
    }
    NeumaierSum acc;
    for (long long j = 0; j <= k; ++j) {
        acc.add(mass(lambda, j));
    }
    const long double v = acc.value();
    return static_cast<double>(v > 1.0L ? 1.0L : v);
}

inline double survival(double lambda, long long k) {
    if (lambda == 0.0) {
        return 0.0;
    }
    const long long cap = static_cast<long long>(
        std::ceil(std::max(static_cast<double>(k + 1), lambda) + 60.0 * std::sqrt(lambda) +
                  80.0));
    NeumaierSum acc;
    for (long long j = k + 1; j <= cap; ++j) {
        acc.add(mass(lambda, j));
    }
    const long double v = acc.value();
    return static_cast<double>(v > 1.0L ? 1.0L : v);
}

inline long long quantile(double lambda, double p) {
    if (!(p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("reference quantile requires 0 <= p < 1");
    }
    NeumaierSum acc;
    const long long cap =
        static_cast<long long>(std::ceil(lambda + 20.0 * std::sqrt(lambda) + 200.0));
    for (long long k = 0; k <= cap; ++k) {
        acc.add(mass(lambda, k));
        if (static_cast<double>(acc.value()) >= p) {
            return k;
        }
    }
    throw std::runtime_error("reference quantile ran past its cap");
}

}  // namespace poisson_ref

#endif  // FSKYLINE_TESTS_POISSON_REFERENCE_HPP
