#include "ebb/measures.hpp"

#include "ebb/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ebb {

namespace {

// int_{-1}^{1} u^n du
double even_moment(std::size_t n) { return (n % 2 == 0) ? 2.0 / static_cast<double>(n + 1) : 0.0; }

// Beyond this distance (in half-widths) from the centre the moment series is used.
constexpr double kSeriesRadius = 3.0;

std::string fmt_interval(double a, double b) {
    std::ostringstream os;
    os << "[" << a << ", " << b << "]";
    return os.str();
}

void check_nonnegative(const DensityPiece& p) {
    const auto n_cheb = 64 + 8 * p.coeffs.size();
    const double c = 0.5 * (p.lo + p.hi);
    const double h = 0.5 * (p.hi - p.lo);
    std::vector<double> xs{p.lo, p.hi};
    for (std::size_t k = 0; k < n_cheb; ++k)
        xs.push_back(c + h * std::cos(std::numbers::pi * (k + 0.5) / static_cast<double>(n_cheb)));
    // Interior critical points catch minima the sampling can straddle.
    if (p.coeffs.size() > 2) {
        for (double r : poly::real_roots(poly::derivative(p.coeffs)))
            if (r > p.lo && r < p.hi) xs.push_back(r);
    }
    double scale = 0.0;
    double min_val = 0.0;
    for (double x : xs) {
        const double v = p(x);
        scale = std::max(scale, std::abs(v));
        min_val = std::min(min_val, v);
    }
    if (min_val < -1e-12 * std::max(1.0, scale)) {
        throw InvariantError("density on " + fmt_interval(p.lo, p.hi) + " takes negative value " +
                             std::to_string(min_val));
    }
}

}  // namespace

double DensityPiece::operator()(double x) const { return poly::evaluate(coeffs, x); }

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
    for (const auto& a : atoms_) {
        if (!std::isfinite(a.position) || !std::isfinite(a.weight))
            throw InvariantError("atom with non-finite position or weight");
        if (a.weight <= 0.0) throw InvariantError("atom weight must be positive");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.position < b.position; });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
        if (atoms_[i].position == atoms_[i - 1].position) throw InvariantError("duplicate atom position");

    for (auto& p : pieces_) {
        if (!(std::isfinite(p.lo) && std::isfinite(p.hi) && p.lo < p.hi))
            throw InvariantError("density piece needs finite lo < hi");
        if (p.coeffs.empty()) p.coeffs.push_back(0.0);
        check_nonnegative(p);
    }
    std::sort(pieces_.begin(), pieces_.end(), [](const DensityPiece& a, const DensityPiece& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < pieces_.size(); ++i)
        if (pieces_[i].lo < pieces_[i - 1].hi)
            throw InvariantError("density pieces " + fmt_interval(pieces_[i - 1].lo, pieces_[i - 1].hi) + " and " +
                                 fmt_interval(pieces_[i].lo, pieces_[i].hi) + " overlap");

    total_mass_ = 0.0;
    for (const auto& a : atoms_) total_mass_ += a.weight;
    for (const auto& p : pieces_) {
        CenteredPiece cp;
        cp.center = 0.5 * (p.lo + p.hi);
        cp.half_width = 0.5 * (p.hi - p.lo);
        cp.scaled = poly::taylor_shift(p.coeffs, cp.center);
        double hn = 1.0;
        cp.mass = 0.0;
        for (std::size_t n = 0; n < cp.scaled.size(); ++n) {
            cp.scaled[n] *= hn;
            hn *= cp.half_width;
            cp.mass += cp.scaled[n] * even_moment(n);
        }
        cp.mass *= cp.half_width;
        total_mass_ += cp.mass;
        centered_.push_back(std::move(cp));
    }
    if (!empty() && !(total_mass_ > 0.0)) throw InvariantError("measure has zero total mass");

    if (!empty()) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& a : atoms_) lo = std::min(lo, a.position), hi = std::max(hi, a.position);
        for (const auto& p : pieces_) lo = std::min(lo, p.lo), hi = std::max(hi, p.hi);
        hull_ = {lo, hi};
    }
}

SpectralMeasure SpectralMeasure::point_mass(double position, double weight) {
    return SpectralMeasure({Atom{position, weight}}, {});
}

SpectralMeasure SpectralMeasure::uniform(const std::vector<std::pair<double, double>>& intervals, double height) {
    std::vector<DensityPiece> pieces;
    for (auto [a, b] : intervals) pieces.push_back({a, b, {height}});
    return SpectralMeasure({}, std::move(pieces));
}

bool SpectralMeasure::in_support(double x) const noexcept {
    for (const auto& a : atoms_)
        if (a.position == x) return true;
    for (const auto& p : pieces_)
        if (x >= p.lo && x <= p.hi) return true;
    return false;
}

double SpectralMeasure::density(double x) const noexcept {
    double s = 0.0;
    for (const auto& p : pieces_)
        if (x >= p.lo && x <= p.hi) s += p(x);
    return s;
}

Complex SpectralMeasure::borel(Complex z) const {
    const bool real_z = z.imag() == 0.0;
    Complex total{};
    for (const auto& a : atoms_) {
        if (real_z && z.real() == a.position)
            throw DomainError("Borel transform evaluated on an atom at " + std::to_string(a.position));
        total += a.weight / (a.position - z);
    }
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const auto& cp = centered_[k];
        const double h = cp.half_width;
        // zeta = (z - c) / h; the piece becomes [-1, 1].
        const Complex zeta = (z - cp.center) / h;
        const std::size_t deg = cp.scaled.size() - 1;
        Complex piece{};
        if (std::abs(zeta) > kSeriesRadius) {
            // 1/(u - zeta) = -sum_k u^k / zeta^{k+1}
            // Odd moments vanish, so stop on a bound for the tail, not on a term.
            const Complex inv = 1.0 / zeta;
            double coeff_sum = 0.0;
            for (double q : cp.scaled) coeff_sum += std::abs(q);
            Complex pow = inv;
            for (std::size_t m = 0; m < 2000; ++m) {
                double moment = 0.0;
                for (std::size_t n = 0; n <= deg; ++n) moment += cp.scaled[n] * even_moment(m + n);
                piece -= moment * pow;
                pow *= inv;
                if (m > deg + 1 && 2.0 * coeff_sum * std::abs(pow) <= 1e-17 * std::abs(piece)) break;
            }
        } else {
            Complex j0;
            if (real_z) {
                const double x = zeta.real();
                if (x >= -1.0 && x <= 1.0)
                    throw DomainError("Borel transform evaluated at real z = " + std::to_string(z.real()) +
                                      " inside density piece " + fmt_interval(pieces_[k].lo, pieces_[k].hi));
                j0 = std::log(std::abs((1.0 - x) / (1.0 + x)));
            } else {
                // Both arguments lie in the same open half-plane, so the
                // difference of principal logs has no branch jump.
                j0 = std::log(1.0 - zeta) - std::log(-1.0 - zeta);
            }
            // J_n = int_{-1}^{1} u^n/(u - zeta) du = (1 - (-1)^n)/n + zeta J_{n-1}
            Complex jn = j0;
            piece = cp.scaled[0] * jn;
            for (std::size_t n = 1; n <= deg; ++n) {
                jn = (n % 2 == 1 ? 2.0 / static_cast<double>(n) : 0.0) + zeta * jn;
                piece += cp.scaled[n] * jn;
            }
        }
        total += piece;
    }
    return total;
}

double SpectralMeasure::poisson(double energy, double eps) const {
    if (!(eps > 0.0)) throw DomainError("Poisson transform requires eps > 0");
    return borel(Complex(energy, eps)).imag();
}

HerglotzFunction HerglotzFunction::of(const SpectralMeasure& mu) {
    const bool has_pieces = !mu.pieces().empty();
    return HerglotzFunction([mu](Complex z) { return mu.borel(z); },
                            has_pieces ? ClosedForm::log_rational : ClosedForm::rational);
}

}  // namespace ebb
