#include "ebb/quadrature.hpp"

#include "ebb/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace ebb::quad {

namespace {

// GSL aborts on error by default; the library reports through return codes.
struct DisableGslAbort {
    DisableGslAbort() { gsl_set_error_handler_off(); }
};
const DisableGslAbort disable_gsl_abort;

double trampoline(double x, void* params) {
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

}  // namespace

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
    }
    if (n == 0) return {1.0, 0.0};
    return {p1, static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

Rule gauss_legendre(std::size_t n, double a, double b) {
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(n), &gsl_integration_glfixed_table_free);
    if (!table) throw NumericalError("cannot build Gauss-Legendre table of size " + std::to_string(n));
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
        double x = 0.0;
        double w = 0.0;
        gsl_integration_glfixed_point(-1.0, 1.0, i, &x, &w, table.get());
        // GSL computes large rules only to ~1e-10; polish on [-1, 1].
        for (int it = 0; it < 3; ++it) {
            const auto [p, dp] = legendre(n, x);
            x -= p / dp;
        }
        const double dp = legendre(n, x).second;
        w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = c + h * x;
        rule.weights[i] = h * w;
    }
    return rule;
}

Estimate integrate(const std::function<double(double)>& f, double a, double b,
                   std::vector<double> breakpoints, const AdaptiveOptions& opts) {
    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
        gsl_integration_workspace_alloc(opts.max_intervals), &gsl_integration_workspace_free);

    std::vector<double> pts{a};
    std::sort(breakpoints.begin(), breakpoints.end());
    for (double p : breakpoints)
        if (p > pts.back() && p < b) pts.push_back(p);
    pts.push_back(b);

    gsl_function fn{&trampoline, const_cast<std::function<double(double)>*>(&f)};
    // Integrate piece by piece with GK61; QAGP's extrapolation is unnecessary
    // for the smooth (after substitution) integrands used here.
    Estimate total{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double value = 0.0;
        double err = 0.0;
        const int status = gsl_integration_qag(&fn, pts[i], pts[i + 1], opts.abs_tol / (pts.size() - 1), opts.rel_tol,
                                               opts.max_intervals, GSL_INTEG_GAUSS61, ws.get(), &value, &err);
        total.value += value;
        total.abs_error += err;
        if (status != GSL_SUCCESS && err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total.value))) {
            throw NumericalError(std::string("adaptive quadrature failed: ") + gsl_strerror(status), err);
        }
    }
    return total;
}

}  // namespace ebb::quad
