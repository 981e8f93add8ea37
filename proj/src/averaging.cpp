#include "ebb/averaging.hpp"

#include "ebb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebb {

namespace {

bool is_left(Vec v) { return v == Vec::chi_l || v == Vec::delta_l; }

// Breakpoints (in lambda) around the real part of a complex pole p of the
// integrand: the peak there has width ~ |Im p|.
void add_peak_hints(std::vector<double>& hints, Complex p) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return;
    const double w = std::abs(p.imag());
    hints.push_back(p.real());
    for (double k : {1.0, 10.0, 100.0}) {
        hints.push_back(p.real() - k * w);
        hints.push_back(p.real() + k * w);
    }
}

// int_{-cap}^{cap} f(lambda) d lambda via lambda = tan(theta).
double integrate_tan(const std::function<double(double)>& f, double lo_cap, double cap,
                     const std::vector<double>& lambda_hints, const AveragingQuadOptions& opts) {
    const double t_lo = std::atan(lo_cap);
    const double t_hi = std::atan(cap);
    auto g = [&f](double theta) {
        const double c = std::cos(theta);
        return f(std::tan(theta)) / (c * c);
    };
    std::vector<double> thetas;
    thetas.reserve(lambda_hints.size());
    for (double l : lambda_hints) thetas.push_back(std::atan(l));
    thetas.push_back(0.0);
    quad::AdaptiveOptions qo;
    qo.abs_tol = opts.abs_tol;
    qo.rel_tol = opts.rel_tol;
    return quad::integrate(g, t_lo, t_hi, std::move(thetas), qo).value;
}

double averaged_quadrature_impl(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps,
                                const AveragingQuadOptions& opts, bool half) {
    if (!(eps > 0.0)) throw DomainError("averaged Poisson transform requires eps > 0");
    if (!is_left(phi)) return averaged_quadrature_impl(model.mirrored(), kappa, mirror(phi), energy, eps, opts, half);
    const Complex z(energy, eps);
    const CouplingParams base{0.0, kappa};
    // Poles of lambda -> G_{lambda,kappa}(phi, phi, z) sit at lambda^2 = 1 / (v w).
    const Complex v = green(model, base, phi, phi, z);
    const Complex w = green(model, base, partner(phi), partner(phi), z);
    std::vector<double> hints;
    const Complex p = 1.0 / std::sqrt(v * w);
    add_peak_hints(hints, p);
    add_peak_hints(hints, -p);
    auto f = [&](double lambda) { return green(model, CouplingParams{lambda, kappa}, phi, phi, z).imag(); };
    if (half) return 2.0 * integrate_tan(f, 0.0, opts.lambda_cap, hints, opts);
    return integrate_tan(f, -opts.lambda_cap, opts.lambda_cap, hints, opts);
}

}  // namespace

Vec partner(Vec v) noexcept {
    switch (v) {
        case Vec::chi_l: return Vec::delta_l;
        case Vec::delta_l: return Vec::chi_l;
        case Vec::chi_r: return Vec::delta_r;
        case Vec::delta_r: return Vec::chi_r;
    }
    return v;
}

double averaged_poisson_closed(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps) {
    if (!(eps > 0.0)) throw DomainError("averaged Poisson transform requires eps > 0");
    if (!is_left(phi)) return averaged_poisson_closed(model.mirrored(), kappa, mirror(phi), energy, eps);
    const Complex z(energy, eps);
    const CouplingParams c{0.0, kappa};
    const Complex v = green(model, c, phi, phi, z);
    const Complex w = green(model, c, partner(phi), partner(phi), z);
    if (w == Complex{}) throw DomainError("averaged Poisson transform: partner Green's function vanishes");
    // Im(i pi s) = pi Re(s); the branch with Re(s) >= 0 is the one giving a
    // non-negative average.
    const double re = (std::numbers::pi * std::sqrt(v / w)).real();
    return std::abs(re);
}

double averaged_poisson_integrand(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps,
                                  double averaged_coupling) {
    const Complex z(energy, eps);
    if (is_left(phi)) return green(model, CouplingParams{averaged_coupling, kappa}, phi, phi, z).imag();
    return green(model, CouplingParams{kappa, averaged_coupling}, phi, phi, z).imag();
}

double averaged_poisson_quadrature(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps,
                                   const AveragingQuadOptions& opts) {
    return averaged_quadrature_impl(model, kappa, phi, energy, eps, opts, false);
}

double averaged_poisson_quadrature_half(const BlackBoxModel& model, double kappa, Vec phi, double energy,
                                        double eps, const AveragingQuadOptions& opts) {
    return averaged_quadrature_impl(model, kappa, phi, energy, eps, opts, true);
}

double rank_one_average(const SpectralMeasure& mu, double energy, double eps, const AveragingQuadOptions& opts) {
    if (!(eps > 0.0)) throw DomainError("rank_one_average requires eps > 0");
    const Complex g = mu.borel(Complex(energy, eps));
    std::vector<double> hints;
    if (g != Complex{}) add_peak_hints(hints, -1.0 / g);
    auto f = [g](double lambda) { return (g / (1.0 + lambda * g)).imag(); };
    return integrate_tan(f, -opts.lambda_cap, opts.lambda_cap, hints, opts);
}

// ----------------------------------------------------------------------------

std::string_view name(AveragedPointVerdict v) noexcept {
    switch (v) {
        case AveragedPointVerdict::bounded: return "BOUNDED";
        case AveragedPointVerdict::divergent: return "DIVERGENT";
        case AveragedPointVerdict::undetermined: return "UNDETERMINED";
        case AveragedPointVerdict::excluded_n: return "EXCLUDED_N";
    }
    return "?";
}

std::string_view name(AbsContinuityVerdict v) noexcept {
    switch (v) {
        case AbsContinuityVerdict::pass: return "PASS";
        case AbsContinuityVerdict::fail: return "FAIL";
        case AbsContinuityVerdict::vacuous: return "VACUOUS";
    }
    return "?";
}

AbsContinuityReport verify_abs_continuity(const BlackBoxModel& model, const ExceptionalSets& sets, double kappa,
                                          const std::vector<double>& grid, const EpsilonLadder& ladder,
                                          const BoundaryTolerances& tol, double exclusion_radius) {
    AbsContinuityReport rep;
    rep.kappa = kappa;
    const BlackBoxModel mirrored = model.mirrored();
    auto closed = [&](Vec phi, double e, double eps) {
        return is_left(phi) ? averaged_poisson_closed(model, kappa, phi, e, eps)
                            : averaged_poisson_closed(mirrored, kappa, mirror(phi), e, eps);
    };

    for (double e : grid) {
        const bool excluded = !sets.n_degenerate &&
                              std::any_of(sets.N.begin(), sets.N.end(),
                                          [&](double x) { return std::abs(x - e) <= exclusion_radius; });
        for (Vec phi : kAllVecs) {
            AveragedPoint pt{e, phi, AveragedPointVerdict::excluded_n, BoundaryStatus::undetermined, std::nullopt};
            if (excluded) {
                rep.points.push_back(pt);
                continue;
            }
            const auto rec = boundary_value([&](Complex z) { return Complex(closed(phi, z.real(), z.imag()), 0.0); },
                                            e, ladder, tol);
            pt.status = rec.status;
            if (rec.value) pt.limit = rec.value->real();
            switch (rec.status) {
                case BoundaryStatus::divergent: pt.verdict = AveragedPointVerdict::divergent; break;
                case BoundaryStatus::undetermined: pt.verdict = AveragedPointVerdict::undetermined; break;
                default: pt.verdict = AveragedPointVerdict::bounded; break;
            }
            rep.points.push_back(pt);
        }
    }
    for (const auto& pt : rep.points) {
        rep.excluded += pt.verdict == AveragedPointVerdict::excluded_n;
        rep.divergent += pt.verdict == AveragedPointVerdict::divergent;
        rep.undetermined += pt.verdict == AveragedPointVerdict::undetermined;
    }
    for (double e : sets.sigma_hs) {
        for (Vec phi : {Vec::delta_l, Vec::delta_r}) {
            // P is the imaginary part of the averaged Borel transform.
            const auto pm = point_mass_of([&](Complex z) { return Complex(0.0, closed(phi, z.real(), z.imag())); },
                                          e, ladder);
            rep.atoms.push_back({e, phi, pm.weight, pm.converged});
        }
    }
    if (sets.n_degenerate) {
        rep.verdict = AbsContinuityVerdict::vacuous;
    } else {
        rep.verdict = rep.divergent == 0 ? AbsContinuityVerdict::pass : AbsContinuityVerdict::fail;
    }
    return rep;
}

}  // namespace ebb
