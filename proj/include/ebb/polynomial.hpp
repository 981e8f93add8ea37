// polynomial.hpp - dense polynomials in the monomial basis and companion-matrix roots

#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ebb::poly {

using Complex = std::complex<double>;

// Coefficients are stored lowest degree first: c[0] + c[1] x + ...
using RealPoly = std::vector<double>;
using ComplexPoly = std::vector<Complex>;

template <class T, class X>
auto evaluate(std::span<const T> c, X x) {
    decltype(T{} * x) acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline double evaluate(const RealPoly& c, double x) { return evaluate(std::span<const double>(c), x); }
inline Complex evaluate(const RealPoly& c, Complex x) { return evaluate(std::span<const double>(c), x); }
inline Complex evaluate(const ComplexPoly& c, Complex x) { return evaluate(std::span<const Complex>(c), x); }
inline Complex evaluate(const ComplexPoly& c, double x) { return evaluate(std::span<const Complex>(c), Complex(x)); }

RealPoly derivative(const RealPoly& c);
ComplexPoly derivative(const ComplexPoly& c);

RealPoly multiply(const RealPoly& a, const RealPoly& b);
ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b);
ComplexPoly add(const ComplexPoly& a, const ComplexPoly& b);
ComplexPoly subtract(const ComplexPoly& a, const ComplexPoly& b);
ComplexPoly conjugate(const ComplexPoly& c);

// Coefficients of p(x + shift).
RealPoly taylor_shift(const RealPoly& c, double shift);

// Largest coefficient magnitude; 0 for the zero polynomial.
double coefficient_scale(const ComplexPoly& c);

// True when every coefficient is at most tol in magnitude.
bool is_negligible(const ComplexPoly& c, double tol);

// All complex roots. Leading coefficients with |c_k| <= rel_trim * max|c| are
// dropped before the companion matrix is formed.
std::vector<Complex> roots(const ComplexPoly& c, double rel_trim = 1e-14);

// Real roots: complex roots with |Im| below imag_tol * max(1, |root|),
// Newton-polished on the real line, sorted and deduplicated.
std::vector<double> real_roots(const RealPoly& c, double imag_tol = 1e-6);

// Real roots of a polynomial with complex coefficients: complex roots that
// polish (complex Newton) onto the real axis within imag_tol.
std::vector<double> real_roots(const ComplexPoly& c, double imag_tol = 1e-9);

}  // namespace ebb::poly
