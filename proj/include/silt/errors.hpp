#pragma once

#include <stdexcept>
#include <string>

namespace silt {

// Caller supplied arguments outside an operation's domain.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A documented precondition on a relation between arguments failed
// (for example N <= M in the Gaussian norm comparison).
class PreconditionError : public InputError {
public:
    using InputError::InputError;
};

// A case the construction does not cover (x_T != x_0 propagators,
// projection directions inside the generating span).
class UnsupportedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A result would need chaos orders above the vector's degree cap.
class TruncationError : public std::range_error {
public:
    using std::range_error::range_error;
};

// Numerical routine did not reach its target accuracy.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved_tolerance)
        : std::runtime_error(what + " (achieved relative error " +
                             std::to_string(achieved_tolerance) + ")"),
          achieved_(achieved_tolerance) {}

    [[nodiscard]] double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace silt
