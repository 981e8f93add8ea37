// errors.hpp - exception types shared by the ebb library

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ebb {

using Complex = std::complex<double>;

// Argument outside the domain of a transform (real z on the support, eps <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Real energy hit an eigenvalue of the system block.
class PoleError : public DomainError {
public:
    PoleError(const std::string& what, std::size_t eigen_index, double eigenvalue)
        : DomainError(what), index_(eigen_index), eigenvalue_(eigenvalue) {}
    std::size_t eigen_index() const noexcept { return index_; }
    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    std::size_t index_;
    double eigenvalue_;
};

// Invariant violated while constructing a measure or a model.
class InvariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: near-singular systems, non-convergent quadrature.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double estimate = 0.0)
        : std::runtime_error(what), estimate_(estimate) {}
    // Condition estimate or achieved accuracy, depending on the raiser.
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

// Scenario-specific routine called on a model of the wrong shape.
class UnsupportedScenario : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace ebb
