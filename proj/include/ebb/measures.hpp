// measures.hpp - finite positive measures on the real line (atoms plus
// piecewise-polynomial densities) and their Borel and Poisson transforms.

#pragma once

#include "ebb/errors.hpp"

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace ebb {

struct Atom {
    double position;
    double weight;
};

// Polynomial density p(x) = sum_k coeffs[k] x^k on [lo, hi].
struct DensityPiece {
    double lo;
    double hi;
    std::vector<double> coeffs;

    double operator()(double x) const;
};

/// Finite positive Borel measure with compact support.
///
/// Invariants (checked by the constructor, which throws InvariantError):
/// atom weights are positive and atom positions distinct; each density is
/// non-negative on its interval; pieces have disjoint interiors. The
/// default-constructed measure is the zero measure.
class SpectralMeasure {
public:
    SpectralMeasure() = default;
    SpectralMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

    static SpectralMeasure point_mass(double position, double weight = 1.0);
    // Constant density `height` on each interval.
    static SpectralMeasure uniform(const std::vector<std::pair<double, double>>& intervals,
                                   double height = 1.0);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<DensityPiece>& pieces() const noexcept { return pieces_; }

    bool empty() const noexcept { return atoms_.empty() && pieces_.empty(); }
    double total_mass() const noexcept { return total_mass_; }
    // Smallest and largest point of the closed support; (0, 0) when empty.
    std::pair<double, double> support_hull() const noexcept { return hull_; }
    // Whether x lies in the closed support.
    bool in_support(double x) const noexcept;
    // Sum of the polynomial densities at x (0 off the pieces).
    double density(double x) const noexcept;

    /// Borel transform  int dmu(x) / (x - z).
    ///
    /// Closed form: atoms give w / (x0 - z); each piece is integrated term
    /// by term in centred coordinates, by the log recurrence near the piece
    /// and by the moment series far from it. Real z is accepted off the
    /// closed support; on the support it raises DomainError.
    Complex borel(Complex z) const;

    // Im borel(E + i eps); requires eps > 0.
    double poisson(double energy, double eps) const;

private:
    struct CenteredPiece {
        double center;
        double half_width;
        std::vector<double> scaled;  // q_n h^n, where p(c + t) = sum q_n t^n
        double mass;
    };

    std::vector<Atom> atoms_;
    std::vector<DensityPiece> pieces_;
    std::vector<CenteredPiece> centered_;
    std::pair<double, double> hull_{0.0, 0.0};
    double total_mass_ = 0.0;
};

inline Complex borel(const SpectralMeasure& mu, Complex z) { return mu.borel(z); }
inline double poisson_density(const SpectralMeasure& mu, double energy, double eps) {
    return mu.poisson(energy, eps);
}

enum class ClosedForm { none, rational, log_rational, composite };

// A function on the upper half-plane expected to be Herglotz, with a tag
// recording how it is evaluated.
class HerglotzFunction {
public:
    HerglotzFunction() = default;
    HerglotzFunction(std::function<Complex(Complex)> f, ClosedForm form = ClosedForm::none)
        : f_(std::move(f)), form_(form) {}

    static HerglotzFunction of(const SpectralMeasure& mu);

    Complex operator()(Complex z) const { return f_(z); }
    ClosedForm form() const noexcept { return form_; }
    explicit operator bool() const noexcept { return static_cast<bool>(f_); }

private:
    std::function<Complex(Complex)> f_;
    ClosedForm form_ = ClosedForm::none;
};

}  // namespace ebb
