// support.hpp - random models and small oracles shared by the tests.

#pragma once

#include "ebb/blackbox.hpp"
#include "ebb/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace ebb::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline int uniform_int(Rng& rng, int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

// Monomial coefficients of sum_k c_k (x - s)^k.
inline std::vector<double> expand_shifted(const std::vector<double>& c, double s) {
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        double binom = 1.0;
        for (std::size_t j = 0; j <= k; ++j) {
            // term c_k * binom(k, j) x^j (-s)^{k-j}
            out[j] += c[k] * binom * std::pow(-s, static_cast<double>(k - j));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
    }
    return out;
}

// Up to max_pieces disjoint pieces of width <= max_width inside [-4, 4] with
// densities a + b (x - lo) + c (x - lo)^2 + d (x - lo)^3, all coefficients >= 0;
// optionally up to two atoms off the pieces.
inline SpectralMeasure random_measure(Rng& rng, int max_pieces = 3, bool atoms = true, double max_width = 2.0) {
    const int n = uniform_int(rng, 1, max_pieces);
    std::vector<double> cuts;
    for (int i = 0; i < 2 * n; ++i) cuts.push_back(uniform(rng, -4.0, 4.0));
    std::sort(cuts.begin(), cuts.end());
    std::vector<DensityPiece> pieces;
    for (int i = 0; i < n; ++i) {
        const double lo = cuts[2 * i];
        const double hi = std::min(cuts[2 * i + 1], lo + max_width);
        if (hi - lo < 0.05) continue;
        std::vector<double> c{uniform(rng, 0.1, 1.0), uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 0.5),
                              uniform(rng, 0.0, 0.2)};
        pieces.push_back({lo, hi, expand_shifted(c, lo)});
    }
    if (pieces.empty()) pieces.push_back({-1.0, 1.0, {1.0}});
    std::vector<Atom> at;
    if (atoms) {
        const int na = uniform_int(rng, 0, 2);
        for (int i = 0; i < na; ++i) {
            const double x = uniform(rng, -5.0, 5.0);
            bool clash = false;
            for (const auto& p : pieces) clash |= x > p.lo - 0.1 && x < p.hi + 0.1;
            for (const auto& a : at) clash |= std::abs(a.position - x) < 0.1;
            if (!clash) at.push_back({x, uniform(rng, 0.1, 1.0)});
        }
    }
    return SpectralMeasure(at, pieces);
}

inline Eigen::MatrixXcd random_hermitian(Rng& rng, int n, double scale = 2.0) {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    Eigen::MatrixXcd h = 0.5 * scale * (a + a.adjoint());
    for (int i = 0; i < n; ++i) h(i, i) = h(i, i).real();
    return h;
}

inline Eigen::VectorXcd random_vector(Rng& rng, int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
    return v;
}

struct RandomModelOptions {
    int max_dim = 8;
    int max_pieces = 3;
    bool atoms = false;
    double max_width = 2.0;
};

inline BlackBoxModel random_model(Rng& rng, const RandomModelOptions& o = {}) {
    const int n = uniform_int(rng, 1, o.max_dim);
    return BlackBoxModel(SystemBlock(random_hermitian(rng, n), random_vector(rng, n), random_vector(rng, n)),
                         random_measure(rng, o.max_pieces, o.atoms, o.max_width),
                         random_measure(rng, o.max_pieces, o.atoms, o.max_width));
}

// Direct oracle for int dmu(x)/(x - z) by adaptive quadrature on each piece.
inline Complex borel_quadrature(const SpectralMeasure& mu, Complex z) {
    Complex total{};
    for (const auto& a : mu.atoms()) total += a.weight / (a.position - z);
    quad::AdaptiveOptions o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-13;
    for (const auto& p : mu.pieces()) {
        std::vector<double> bp;
        if (z.real() > p.lo && z.real() < p.hi) bp.push_back(z.real());
        const double re = quad::integrate(
            [&](double x) { return (p(x) / (x - z)).real(); }, p.lo, p.hi, bp, o).value;
        const double im = quad::integrate(
            [&](double x) { return (p(x) / (x - z)).imag(); }, p.lo, p.hi, bp, o).value;
        total += Complex(re, im);
    }
    return total;
}

// Relative error, falling back to absolute error below `floor`.
inline double rel_err(Complex a, Complex b, double floor = 1e-12) {
    return std::abs(a - b) / std::max(std::abs(b), floor);
}

}  // namespace ebb::test
