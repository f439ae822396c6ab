#pragma once

#include <stdexcept>
#include <string>

namespace qppf {

// Input outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A quadrature / ODE / series failed to reach its tolerance. Carries the
// best estimate and the error bound at the point of failure.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// Parse / validation failure in a config or data file; message carries the
// file name and line number.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Requested regime is outside what the implementation supports.
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Two redundant computational paths disagreed beyond tolerance.
class InternalConsistencyError : public std::runtime_error {
public:
    explicit InternalConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

// Mismatched grids or otherwise incompatible arguments.
class InterfaceError : public std::runtime_error {
public:
    explicit InterfaceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qppf
