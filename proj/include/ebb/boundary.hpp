// boundary.hpp - boundary values G(E + i0) from a geometric ladder of eps,
// energy classification against the reservoir sets, and extraction of
// absolutely continuous densities and point masses.

#pragma once

#include "ebb/blackbox.hpp"
#include "ebb/resolvent.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ebb {

struct EpsilonLadder {
    double eps_max = 1e-1;
    double eps_min = 1e-9;
    double ratio = 0.5;

    // Throws InvariantError unless 0 < eps_min < eps_max and ratio in (0, 1).
    void check() const;
    // eps_min / ratio^k for k = 0, 1, ... up to eps_max, returned in
    // decreasing order; the last rung is exactly eps_min.
    std::vector<double> rungs() const;
};

struct BoundaryTolerances {
    double div_tol = 1e6;
    double zero_tol = 1e-6;
    double im_tol = 1e-8;
    std::size_t window = 5;
};

enum class BoundaryStatus { finite_nonzero, zero, divergent, undetermined };

std::string_view name(BoundaryStatus s) noexcept;

struct BoundaryRecord {
    double energy = 0.0;
    BoundaryStatus status = BoundaryStatus::undetermined;
    std::optional<Complex> value;      // extrapolated G(E + i0)
    std::optional<double> im_limit;
    std::optional<double> pole_weight; // lim eps Im G(E + i eps), divergent case
    double slope = 0.0;                // d log|G| / d log eps over the window
    std::vector<std::pair<double, Complex>> trace;
    std::string note;
};

/// Evaluates f(E + i eps) down the ladder and classifies the limit.
///
/// Divergent: slope <= -1/2 and |f| > div_tol on the last rung. Zero: |f| <
/// zero_tol and non-increasing over the window. Finite: successive
/// differences over the window shrink by at least 1.5x (or sit at rounding
/// level); the value is the linear-in-eps Richardson extrapolation of the
/// last two rungs. Anything else, including a failed evaluation, is
/// undetermined.
BoundaryRecord boundary_value(const std::function<Complex(Complex)>& f, double energy,
                              const EpsilonLadder& ladder = {}, const BoundaryTolerances& tol = {});

// Linear Richardson step: value at eps = 0 from samples at eps1 > eps2.
Complex richardson(double eps1, Complex f1, double eps2, Complex f2) noexcept;

struct CSetDiagnostic {
    Vec phi = Vec::chi_l;   // C_{phi, psi} with psi the partner of phi
    bool applicable = false;
    bool chi_l_condition = false;  // |G_0(chi_l)| -> inf (phi = chi_l) or -> 0 (phi = delta_l)
    bool chi_r_condition = false;  // G_0(chi_r, E + i0) equals the target
    std::optional<Complex> target;
    bool met() const noexcept { return applicable && chi_l_condition && chi_r_condition; }
};

struct EnergyClassification {
    double energy = 0.0;
    bool in_M0 = false;
    bool in_Ml = false;
    bool in_Mr = false;
    bool in_sigma_hs = false;
    bool in_S = false;
    std::optional<bool> in_N;  // nullopt when N is the whole line
    bool near_pole = false;    // within 1e-12 of sigma(H_S)
    BoundaryRecord chi_l;
    BoundaryRecord chi_r;
    std::optional<double> nu;
    std::vector<CSetDiagnostic> c_sets;
};

struct ClassifyOptions {
    EpsilonLadder ladder{};
    BoundaryTolerances tol{};
    double set_match_tol = 1e-9;
    double c_set_rel_tol = 1e-6;
};

EnergyClassification classify_energy(const BlackBoxModel& model, const ExceptionalSets& sets, double energy,
                                     std::optional<double> nu = std::nullopt, const ClassifyOptions& opts = {});

struct DensityEstimate {
    double value = 0.0;  // (1/pi) Im G(E + i0); meaningful for finite/zero status
    BoundaryStatus status = BoundaryStatus::undetermined;
    BoundaryRecord record;
    // Divergent ladders signal a point mass, not a density.
    bool ok() const noexcept {
        return status == BoundaryStatus::finite_nonzero || status == BoundaryStatus::zero;
    }
};

DensityEstimate ac_density(const BlackBoxModel& model, CouplingParams c, Vec phi, double energy,
                           const EpsilonLadder& ladder = {}, const BoundaryTolerances& tol = {});

struct PointMassEstimate {
    double weight = 0.0;
    bool converged = false;
    std::vector<std::pair<double, double>> trace;  // (eps, eps Im G)
};

// lim eps Im G_{lambda,nu}(phi, phi, E + i eps); below 1e-10 reported as 0.
PointMassEstimate point_mass(const BlackBoxModel& model, CouplingParams c, Vec phi, double energy,
                             const EpsilonLadder& ladder = {});

// Same extraction for an arbitrary function.
PointMassEstimate point_mass_of(const std::function<Complex(Complex)>& f, double energy,
                                const EpsilonLadder& ladder = {});

}  // namespace ebb
