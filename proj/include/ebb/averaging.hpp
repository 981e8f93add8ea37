// averaging.hpp - spectral averaging over one coupling constant.
//
// For phi in {chi_l, delta_l} and fixed nu, the averaged Poisson transform
//   P(E + i eps) = int_R Im G_{lambda,nu}(phi, phi, E + i eps) d lambda
// has the closed form Im(i pi sqrt(v / w)) with v = G_{0,nu}(phi, phi),
// w = G_{0,nu}(psi, psi), psi the partner of phi. Right-side vectors average
// over nu at fixed lambda and are handled through the mirrored model.

#pragma once

#include "ebb/blackbox.hpp"
#include "ebb/boundary.hpp"
#include "ebb/resolvent.hpp"

#include <limits>
#include <vector>

namespace ebb {

// chi_l <-> delta_l, chi_r <-> delta_r.
Vec partner(Vec v) noexcept;

// kappa is the coupling held fixed: nu for left vectors, lambda for right ones.
double averaged_poisson_closed(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps);

struct AveragingQuadOptions {
    double lambda_cap = std::numeric_limits<double>::infinity();
    double abs_tol = 1e-9;
    double rel_tol = 1e-10;
};

// Integrand lambda -> Im G_{lambda,kappa}(phi, phi, E + i eps) (left vectors;
// right vectors on the mirrored model).
double averaged_poisson_integrand(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps,
                                  double averaged_coupling);

// Adaptive quadrature of the integrand over [-cap, cap] after lambda = tan(theta).
double averaged_poisson_quadrature(const BlackBoxModel& model, double kappa, Vec phi, double energy, double eps,
                                   const AveragingQuadOptions& opts = {});

// Same, integrating only lambda >= 0 and doubling (the integrand is even in lambda).
double averaged_poisson_quadrature_half(const BlackBoxModel& model, double kappa, Vec phi, double energy,
                                        double eps, const AveragingQuadOptions& opts = {});

// int_R Im[ G / (1 + lambda G) ] d lambda with G = borel(mu, E + i eps).
// Equals pi whenever Im G > 0.
double rank_one_average(const SpectralMeasure& mu, double energy, double eps,
                        const AveragingQuadOptions& opts = {1e300, 1e-11, 1e-12});

enum class AveragedPointVerdict { bounded, divergent, undetermined, excluded_n };
enum class AbsContinuityVerdict { pass, fail, vacuous };

std::string_view name(AveragedPointVerdict v) noexcept;
std::string_view name(AbsContinuityVerdict v) noexcept;

struct AveragedPoint {
    double energy;
    Vec phi;
    AveragedPointVerdict verdict;
    BoundaryStatus status;
    std::optional<double> limit;
};

// lim eps * P(E + i eps): a positive value exhibits an atom of the averaged measure.
struct AtomIndicator {
    double energy;
    Vec phi;
    double value;
    bool converged;
};

struct AbsContinuityReport {
    double kappa = 0.0;
    AbsContinuityVerdict verdict = AbsContinuityVerdict::fail;
    std::vector<AveragedPoint> points;
    std::vector<AtomIndicator> atoms;  // evaluated at each point of sigma(H_S)
    std::size_t excluded = 0;
    std::size_t divergent = 0;
    std::size_t undetermined = 0;
};

// Runs the boundary ladder on eps -> P(E + i eps) for all four vectors at each
// grid energy. PASS iff no divergence away from N; VACUOUS when N is the
// whole line. Grid points within exclusion_radius of N are skipped.
AbsContinuityReport verify_abs_continuity(const BlackBoxModel& model, const ExceptionalSets& sets, double kappa,
                                          const std::vector<double>& grid, const EpsilonLadder& ladder = {},
                                          const BoundaryTolerances& tol = {}, double exclusion_radius = 1e-6);

}  // namespace ebb
