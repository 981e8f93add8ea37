#include "ebb/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ebb {

namespace {

// Successive differences below this (relative) size are treated as converged.
constexpr double kRoundingFloor = 1e-13;
constexpr double kCauchyFactor = 1.5;
constexpr double kPointMassFloor = 1e-10;

double fit_slope(const std::vector<std::pair<double, Complex>>& tr, std::size_t first) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(tr.size() - first);
    for (std::size_t k = first; k < tr.size(); ++k) {
        const double x = std::log(tr[k].first);
        const double y = std::log(std::abs(tr[k].second));
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

void EpsilonLadder::check() const {
    if (!(eps_min > 0.0 && eps_min < eps_max && std::isfinite(eps_max)))
        throw InvariantError("ladder needs 0 < eps_min < eps_max");
    if (!(ratio > 0.0 && ratio < 1.0)) throw InvariantError("ladder ratio must lie in (0, 1)");
}

std::vector<double> EpsilonLadder::rungs() const {
    check();
    std::vector<double> out;
    for (double e = eps_min; e <= eps_max * (1.0 + 1e-12); e /= ratio) out.push_back(e);
    std::reverse(out.begin(), out.end());
    return out;
}

std::string_view name(BoundaryStatus s) noexcept {
    switch (s) {
        case BoundaryStatus::finite_nonzero: return "FINITE_NONZERO";
        case BoundaryStatus::zero: return "ZERO";
        case BoundaryStatus::divergent: return "DIVERGENT";
        case BoundaryStatus::undetermined: return "UNDETERMINED";
    }
    return "?";
}

Complex richardson(double eps1, Complex f1, double eps2, Complex f2) noexcept {
    return (eps1 * f2 - eps2 * f1) / (eps1 - eps2);
}

BoundaryRecord boundary_value(const std::function<Complex(Complex)>& f, double energy, const EpsilonLadder& ladder,
                              const BoundaryTolerances& tol) {
    BoundaryRecord rec;
    rec.energy = energy;
    const auto eps = ladder.rungs();
    for (double e : eps) {
        try {
            const Complex v = f(Complex(energy, e));
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                rec.note = "non-finite value at eps = " + std::to_string(e);
                return rec;
            }
            rec.trace.emplace_back(e, v);
        } catch (const std::exception& ex) {
            rec.note = std::string("evaluation failed: ") + ex.what();
            return rec;
        }
    }
    const std::size_t n = rec.trace.size();
    const std::size_t w = std::min(std::max<std::size_t>(tol.window, 3), n);
    if (n < 3) {
        rec.note = "ladder too short";
        return rec;
    }
    const std::size_t first = n - w;
    const auto& [e1, f1] = rec.trace[n - 2];
    const auto& [e2, f2] = rec.trace[n - 1];
    const double last_abs = std::abs(f2);

    bool any_zero = false;
    for (std::size_t k = first; k < n; ++k) any_zero = any_zero || rec.trace[k].second == Complex{};
    rec.slope = any_zero ? 0.0 : fit_slope(rec.trace, first);

    if (rec.slope <= -0.5 && last_abs > tol.div_tol) {
        rec.status = BoundaryStatus::divergent;
        if (std::abs(rec.slope + 1.0) <= 0.25) {
            const double g = richardson(e1, e1 * f1.imag(), e2, e2 * f2.imag()).real();
            rec.pole_weight = std::max(0.0, g);
        }
        return rec;
    }

    bool non_increasing = true;
    for (std::size_t k = first + 1; k < n; ++k)
        non_increasing = non_increasing && std::abs(rec.trace[k].second) <= std::abs(rec.trace[k - 1].second) * (1 + 1e-12);
    if (last_abs < tol.zero_tol && non_increasing) {
        rec.status = BoundaryStatus::zero;
        rec.value = richardson(e1, f1, e2, f2);
        rec.im_limit = rec.value->imag();
        return rec;
    }

    // Cauchy test: each difference at least kCauchyFactor smaller than the previous one.
    bool cauchy = true;
    for (std::size_t k = first + 2; k < n; ++k) {
        const double prev = std::abs(rec.trace[k - 1].second - rec.trace[k - 2].second);
        const double cur = std::abs(rec.trace[k].second - rec.trace[k - 1].second);
        const double floor = kRoundingFloor * std::max(1.0, std::abs(rec.trace[k].second));
        if (cur <= floor) continue;
        if (prev < kCauchyFactor * cur) cauchy = false;
    }
    if (!cauchy) {
        rec.note = "ladder not Cauchy";
        return rec;
    }
    const Complex v = richardson(e1, f1, e2, f2);
    if (std::abs(v) >= tol.div_tol) {
        rec.note = "converged value exceeds div_tol";
        return rec;
    }
    rec.value = v;
    rec.im_limit = v.imag();
    rec.status = std::abs(v) <= tol.zero_tol ? BoundaryStatus::zero : BoundaryStatus::finite_nonzero;
    return rec;
}

// ----------------------------------------------------------------------------

EnergyClassification classify_energy(const BlackBoxModel& model, const ExceptionalSets& sets, double energy,
                                     std::optional<double> nu, const ClassifyOptions& opts) {
    EnergyClassification out;
    out.energy = energy;
    out.nu = nu;
    out.in_sigma_hs = sets.in_sigma(energy, opts.set_match_tol);
    out.in_S = sets.in_S(energy, opts.set_match_tol);
    out.in_N = sets.in_N(energy, opts.set_match_tol);
    for (double e : sets.sigma_hs) out.near_pole = out.near_pole || std::abs(e - energy) <= 1e-12;

    const auto& res_l = model.reservoir_l();
    const auto& res_r = model.reservoir_r();
    out.chi_l = boundary_value([&](Complex z) { return res_l.borel(z); }, energy, opts.ladder, opts.tol);
    out.chi_r = boundary_value([&](Complex z) { return res_r.borel(z); }, energy, opts.ladder, opts.tol);

    out.in_M0 = out.chi_l.status == BoundaryStatus::finite_nonzero &&
                out.chi_r.status == BoundaryStatus::finite_nonzero;
    auto im_ok = [&](const BoundaryRecord& r) {
        return r.im_limit && *r.im_limit > opts.tol.im_tol && *r.im_limit < 1.0 / opts.tol.im_tol;
    };
    out.in_Ml = out.in_M0 && im_ok(out.chi_l);
    out.in_Mr = out.in_M0 && im_ok(out.chi_r);

    if (nu && *nu != 0.0 && !out.near_pole && !out.in_sigma_hs) {
        const double n2 = *nu * *nu;
        const double a = g0(model, Vec::delta_l, Vec::delta_l, energy).real();
        const double b = g0(model, Vec::delta_r, Vec::delta_r, energy).real();
        const double d = d_function(model, energy);
        auto r_matches = [&](Complex target) {
            return out.chi_r.status == BoundaryStatus::finite_nonzero &&
                   std::abs(*out.chi_r.value - target) <= opts.c_set_rel_tol * std::max(1.0, std::abs(target));
        };
        const double d_scale = std::max(1.0, std::abs(a * b));

        CSetDiagnostic cx;
        cx.phi = Vec::chi_l;
        cx.applicable = std::abs(d) > 1e-12 * d_scale && out.in_N != std::optional<bool>(true);
        if (cx.applicable) {
            cx.target = Complex(a / (n2 * d));
            cx.chi_l_condition = out.chi_l.status == BoundaryStatus::divergent;
            cx.chi_r_condition = r_matches(*cx.target);
        }
        out.c_sets.push_back(cx);

        CSetDiagnostic cd;
        cd.phi = Vec::delta_l;
        cd.applicable = std::abs(b) > 1e-14 && out.in_N != std::optional<bool>(true);
        if (cd.applicable) {
            cd.target = Complex(1.0 / (n2 * b));
            cd.chi_l_condition = out.chi_l.status == BoundaryStatus::zero;
            cd.chi_r_condition = r_matches(*cd.target);
        }
        out.c_sets.push_back(cd);
    }
    return out;
}

// ----------------------------------------------------------------------------

DensityEstimate ac_density(const BlackBoxModel& model, CouplingParams c, Vec phi, double energy,
                           const EpsilonLadder& ladder, const BoundaryTolerances& tol) {
    DensityEstimate out;
    out.record = boundary_value([&](Complex z) { return green(model, c, phi, phi, z); }, energy, ladder, tol);
    out.status = out.record.status;
    if (out.status == BoundaryStatus::finite_nonzero)
        out.value = std::max(0.0, *out.record.im_limit / std::numbers::pi);
    return out;
}

PointMassEstimate point_mass_of(const std::function<Complex(Complex)>& f, double energy, const EpsilonLadder& ladder) {
    PointMassEstimate out;
    for (double e : ladder.rungs()) {
        try {
            out.trace.emplace_back(e, e * f(Complex(energy, e)).imag());
        } catch (const std::exception&) {
            return out;
        }
    }
    const std::size_t n = out.trace.size();
    if (n < 3) return out;
    auto step = [&](std::size_t i) {
        return richardson(out.trace[i - 1].first, out.trace[i - 1].second, out.trace[i].first, out.trace[i].second)
            .real();
    };
    const double last = step(n - 1);
    const double prev = step(n - 2);
    out.converged = std::abs(last - prev) <= 1e-6 * std::max(1.0, std::abs(last));
    out.weight = last < kPointMassFloor ? 0.0 : last;
    return out;
}

PointMassEstimate point_mass(const BlackBoxModel& model, CouplingParams c, Vec phi, double energy,
                             const EpsilonLadder& ladder) {
    return point_mass_of([&](Complex z) { return green(model, c, phi, phi, z); }, energy, ladder);
}

}  // namespace ebb
