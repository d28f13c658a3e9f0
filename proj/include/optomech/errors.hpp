#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

// Invalid input: bad parameter values, malformed configs, bad grids.
// The CLI maps this to exit code 2.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure (solver non-convergence, singular configuration).
// The CLI maps this and its subclasses to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// The requested operation needs a dynamically stable system.
class StabilityError : public NumericError {
public:
    StabilityError(const std::string& what, double margin)
        : NumericError(what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

// A computed object violates a physical invariant it must satisfy
// (non-physical covariance, negative occupation, ...).
class IntegrityError : public NumericError {
public:
    explicit IntegrityError(const std::string& what) : NumericError(what) {}
};

}  // namespace optomech
