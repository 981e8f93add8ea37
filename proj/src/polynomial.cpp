#include "ebb/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ebb::poly {

namespace {

template <class T>
std::vector<T> derivative_impl(const std::vector<T>& c) {
    if (c.size() <= 1) return {};
    std::vector<T> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<double>(k);
    return d;
}

template <class T>
std::vector<T> multiply_impl(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<T> out(a.size() + b.size() - 1, T{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

ComplexPoly to_complex(const RealPoly& c) { return ComplexPoly(c.begin(), c.end()); }

Complex newton_polish(const ComplexPoly& c, const ComplexPoly& dc, Complex x) {
    for (int it = 0; it < 50; ++it) {
        const Complex f = evaluate(c, x);
        const Complex df = evaluate(dc, x);
        if (std::abs(df) == 0.0) break;
        const Complex step = f / df;
        x -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (double x : xs) {
        if (out.empty() || std::abs(x - out.back()) > 1e-10 * std::max(1.0, std::abs(x))) out.push_back(x);
    }
    return out;
}

}  // namespace

RealPoly derivative(const RealPoly& c) { return derivative_impl(c); }
ComplexPoly derivative(const ComplexPoly& c) { return derivative_impl(c); }
RealPoly multiply(const RealPoly& a, const RealPoly& b) { return multiply_impl(a, b); }
ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b) { return multiply_impl(a, b); }

ComplexPoly add(const ComplexPoly& a, const ComplexPoly& b) {
    ComplexPoly out(std::max(a.size(), b.size()), Complex{});
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

ComplexPoly subtract(const ComplexPoly& a, const ComplexPoly& b) {
    ComplexPoly out(std::max(a.size(), b.size()), Complex{});
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

ComplexPoly conjugate(const ComplexPoly& c) {
    ComplexPoly out(c.size());
    std::transform(c.begin(), c.end(), out.begin(), [](Complex v) { return std::conj(v); });
    return out;
}

RealPoly taylor_shift(const RealPoly& c, double shift) {
    // Repeated synthetic division (Horner's scheme applied n times).
    RealPoly out = c;
    const std::size_t n = out.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t j = n - 1; j > k; --j) out[j - 1] += shift * out[j];
    return out;
}

double coefficient_scale(const ComplexPoly& c) {
    double m = 0.0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

bool is_negligible(const ComplexPoly& c, double tol) {
    return std::all_of(c.begin(), c.end(), [tol](Complex v) { return std::abs(v) <= tol; });
}

std::vector<Complex> roots(const ComplexPoly& c, double rel_trim) {
    const double scale = coefficient_scale(c);
    if (scale == 0.0) return {};
    std::size_t deg = c.size() - 1;
    while (deg > 0 && std::abs(c[deg]) <= rel_trim * scale) --deg;
    if (deg == 0) return {};

    // Companion matrix of the monic polynomial.
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (std::size_t i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> out(deg);
    for (std::size_t i = 0; i < deg; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

std::vector<double> real_roots(const RealPoly& c, double imag_tol) {
    const ComplexPoly cc = to_complex(c);
    const RealPoly dc = derivative(c);
    std::vector<double> out;
    for (Complex r : roots(cc)) {
        if (std::abs(r.imag()) > imag_tol * std::max(1.0, std::abs(r))) continue;
        double x = r.real();
        for (int it = 0; it < 50; ++it) {
            const double f = evaluate(c, x);
            const double df = evaluate(dc, x);
            if (df == 0.0) break;
            const double step = f / df;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
        }
        out.push_back(x);
    }
    return sorted_unique(std::move(out));
}

std::vector<double> real_roots(const ComplexPoly& c, double imag_tol) {
    const ComplexPoly dc = derivative(c);
    std::vector<double> out;
    for (Complex r : roots(c)) {
        const Complex x = newton_polish(c, dc, r);
        if (std::abs(x.imag()) <= imag_tol * std::max(1.0, std::abs(x))) out.push_back(x.real());
    }
    return sorted_unique(std::move(out));
}

}  // namespace ebb::poly
