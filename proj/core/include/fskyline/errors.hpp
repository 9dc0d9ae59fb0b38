#ifndef FSKYLINE_ERRORS_HPP
#define FSKYLINE_ERRORS_HPP

#include <stdexcept>

namespace fskyline {

/// Malformed or out-of-domain input: files, schemas, tuple values, query specs.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed to converge or exceeded its configured bounds
/// (simplex iteration cap, quantile search past its upper clamp). Never silent.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fskyline

#endif  // FSKYLINE_ERRORS_HPP
