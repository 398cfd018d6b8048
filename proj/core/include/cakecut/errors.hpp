#pragma once

#include <stdexcept>
#include <string>

namespace cakecut {

// Base class for all library errors. The CLI maps each subclass to a
// distinct process exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input: bad interval bounds, non-monotone cdf data, unparsable
// grammar, inconsistent mix weights.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Input is well-formed but outside the function's domain, e.g. a point
// outside [0,1] or a quantile level above the total mass.
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A configured resource bound would be exceeded (jump-subset enumeration,
// oracle grid size).
class CapacityError : public Error {
public:
    using Error::Error;
};

// A documented precondition does not hold for this input, e.g. exact
// division on a valuation with atoms, or slicing a valuation with jumps.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace cakecut
