// certify.hpp - pointwise certificates that D(E + i0) does not vanish on the
// reservoir a.c. support, and the scalar gap-eigenvector scenario.

#pragma once

#include "ebb/blackbox.hpp"
#include "ebb/boundary.hpp"
#include "ebb/resolvent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ebb {

enum class CertVerdict { certified, out_of_scope, numerically_unresolved };

std::string_view name(CertVerdict v) noexcept;

struct CertificatePoint {
    double energy = 0.0;
    bool in_scope = false;
    std::optional<double> abs_D;
    // Imaginary-part identities obtained from D = 0:
    //   -nu^2 |c|^2 Im r = lambda^2 Im l |a - nu^2 d r|^2        (aux1)
    //   -lambda^2 |c|^2 Im l = nu^2 Im r |b - lambda^2 d l|^2    (aux2)
    // with a, b, c the system Green's functions at E, l, r the reservoir
    // boundary values. Right sides are >= 0 and left sides <= 0.
    double aux1_lhs = 0.0, aux1_rhs = 0.0;
    double aux2_lhs = 0.0, aux2_rhs = 0.0;
    bool sign_structure_ok = false;
    CertVerdict verdict = CertVerdict::out_of_scope;
    std::string note;
};

struct Certificate {
    CouplingParams coupling;
    std::vector<CertificatePoint> points;
    std::optional<double> min_abs_D;  // over certified points
    std::size_t certified = 0;
    std::size_t out_of_scope = 0;
    std::size_t unresolved = 0;
};

struct CertifyOptions {
    ClassifyOptions classify{};
    double d_floor = 1e-8;
};

/// For each grid energy in (M_l u M_r) minus (sigma(H_S) u S): evaluates
/// D(E + i0) from the extrapolated reservoir boundary values together with
/// both identities. CERTIFIED when |D| > d_floor and the sign structure
/// holds. This is a statement about the sampled energies only.
Certificate certify_no_sc(const BlackBoxModel& model, const ExceptionalSets& sets, CouplingParams coupling,
                          const std::vector<double>& grid, const CertifyOptions& opts = {});

// H_S = 0 on C, delta_l = delta_r = 1, both reservoirs Lebesgue measure on
// [-2, -1] u [1, 2] with chi = 1.
BlackBoxModel remark2_model();

// H_S = [[1, t], [t, -1]], delta_l = e1, delta_r = e2, with the reservoirs of remark2_model().
BlackBoxModel t2_model(double t = 0.5);

struct EigenResidual {
    double residual;        // |H psi| / |psi| in the discretized model
    double weight_estimate; // |(delta, psi)|^2 / |psi|^2
};

/// Zero-energy eigenvector (-lambda/x) + 1 + (-nu/x) of the scalar model
/// (H_S = 0, delta_l = delta_r = 1), built on the discretization nodes.
/// Throws UnsupportedScenario for models of another shape.
EigenResidual eigen_residual(const BlackBoxModel& model, CouplingParams coupling, std::size_t nodes_per_piece);

}  // namespace ebb
