// quadrature.hpp - thin wrappers over GSL: Gauss-Legendre rules and
// globally adaptive Gauss-Kronrod integration with user breakpoints.

#pragma once

#include <functional>
#include <vector>

namespace ebb::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(std::size_t n, double a, double b);

struct Estimate {
    double value;
    double abs_error;
};

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 4000;
};

// Adaptive 61-point Gauss-Kronrod on [a, b] with interior breakpoints.
// Throws NumericalError (carrying the achieved error) when the requested
// accuracy is not reached.
Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   std::vector<double> breakpoints = {}, const AdaptiveOptions& opts = {});

}  // namespace ebb::quad
