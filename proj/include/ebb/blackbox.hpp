// blackbox.hpp - the uncoupled model: a finite system block H_S with two
// distinguished vectors, and two reservoirs given by the spectral measures
// of their coupling vectors.

#pragma once

#include "ebb/errors.hpp"
#include "ebb/measures.hpp"
#include "ebb/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ebb {

// The four distinguished vectors.
enum class Vec { chi_l, chi_r, delta_l, delta_r };

inline constexpr std::array<Vec, 4> kAllVecs{Vec::chi_l, Vec::chi_r, Vec::delta_l, Vec::delta_r};

std::string_view name(Vec v) noexcept;
std::optional<Vec> parse_vec(std::string_view s) noexcept;
// Image under the left/right relabeling.
Vec mirror(Vec v) noexcept;
inline bool is_system_vec(Vec v) noexcept { return v == Vec::delta_l || v == Vec::delta_r; }
inline std::size_t index(Vec v) noexcept { return static_cast<std::size_t>(v); }

class SystemBlock {
public:
    // Distinct eigenvalue with the eigenvectors merged into it.
    struct Level {
        double energy;
        std::vector<Eigen::Index> members;
    };

    // Throws InvariantError unless h is square and Hermitian to 1e-14
    // (relative to max(1, |h|)) and both deltas are nonzero and of matching size.
    SystemBlock(Eigen::MatrixXcd h, Eigen::VectorXcd delta_l, Eigen::VectorXcd delta_r);

    Eigen::Index dim() const noexcept { return h_.rows(); }
    const Eigen::MatrixXcd& hamiltonian() const noexcept { return h_; }
    const Eigen::VectorXcd& delta(Vec v) const;
    const Eigen::VectorXd& eigenvalues() const noexcept { return evals_; }
    const Eigen::MatrixXcd& eigenvectors() const noexcept { return evecs_; }
    const std::vector<Level>& levels() const noexcept { return levels_; }
    double hermiticity_residual() const noexcept { return herm_residual_; }
    double norm() const noexcept { return norm_; }

    // sum over the level's eigenvectors e of (phi, e)(e, psi); phi, psi system vectors.
    Complex residue(std::size_t level, Vec phi, Vec psi) const;

private:
    Eigen::MatrixXcd h_;
    Eigen::VectorXcd delta_l_;
    Eigen::VectorXcd delta_r_;
    Eigen::VectorXd evals_;
    Eigen::MatrixXcd evecs_;
    std::vector<Level> levels_;
    double herm_residual_ = 0.0;
    double norm_ = 0.0;
};

/// Uncoupled model H_0 = H_l + H_S + H_r with its distinguished vectors.
///
/// The constructor enforces the non-decoupling condition: the rational
/// function E -> G_0(delta_l, delta_r, E) must not vanish identically.
class BlackBoxModel {
public:
    BlackBoxModel(SystemBlock system, SpectralMeasure res_l, SpectralMeasure res_r);

    const SystemBlock& system() const noexcept { return system_; }
    const SpectralMeasure& reservoir_l() const noexcept { return res_l_; }
    const SpectralMeasure& reservoir_r() const noexcept { return res_r_; }
    // Spectral measure of chi_l (Vec::chi_l) or chi_r.
    const SpectralMeasure& reservoir(Vec chi) const;

    // Swap left and right: reservoirs and the two system vectors.
    BlackBoxModel mirrored() const;

    // E -> G_0(phi, psi, E) for system vectors, as numerator(E) / denominator(E)
    // with denominator = prod over levels (E_k - E).
    const poly::ComplexPoly& numerator(Vec phi, Vec psi) const;
    const poly::RealPoly& denominator() const noexcept { return denominator_; }

private:
    SystemBlock system_;
    SpectralMeasure res_l_;
    SpectralMeasure res_r_;
    std::array<poly::ComplexPoly, 4> numerators_;  // ll, lr, rl, rr
    poly::RealPoly denominator_;
};

// G_0(phi, psi, z) = (phi, (H_0 - z)^{-1} psi).
//
// Pairs from different blocks vanish. Real z is allowed for system pairs off
// sigma(H_S) (otherwise PoleError) and for chi pairs off the reservoir support.
Complex g0(const BlackBoxModel& model, Vec phi, Vec psi, Complex z);

// The 4x4 matrix [G_0(u, v, z)] indexed by Vec.
Eigen::Matrix4cd g0_matrix(const BlackBoxModel& model, Complex z);

// d(E) = G_0(dl,dl,E) G_0(dr,dr,E) - G_0(dl,dr,E) G_0(dr,dl,E) for real E off sigma(H_S).
double d_function(const BlackBoxModel& model, double energy);

struct ExceptionalSets {
    std::vector<double> sigma_hs;
    // Real zeros of G_0(delta_l, delta_r, .).
    std::vector<double> S;
    // sigma(H_S) together with the real zeros of a * b * G_0(dl,dr) * d;
    // meaningless when n_degenerate (d identically zero).
    std::vector<double> N;
    bool n_degenerate = false;

    bool in_sigma(double e, double tol = 1e-9) const;
    bool in_S(double e, double tol = 1e-9) const;
    // nullopt when N is the whole line.
    std::optional<bool> in_N(double e, double tol = 1e-9) const;
    // Points of N outside sigma(H_S); empty when N sits inside the spectrum.
    std::vector<double> n_outside_sigma(double tol = 1e-9) const;
};

ExceptionalSets exceptional_sets(const BlackBoxModel& model);

struct ValidationReport {
    double hermiticity_residual = 0.0;
    bool hermitian = false;
    bool deltas_nonzero = false;
    bool vanish_condition = false;
    std::size_t cyclic_rank = 0;
    std::size_t dim = 0;
    bool reservoir_l_nontrivial = false;
    bool reservoir_r_nontrivial = false;
    bool d_degenerate = false;
    std::vector<std::string> messages;

    bool cyclic() const noexcept { return cyclic_rank == dim; }
    // Hard requirements only; cyclicity and the degenerate flag are informational.
    bool passed() const noexcept {
        return hermitian && deltas_nonzero && vanish_condition && reservoir_l_nontrivial && reservoir_r_nontrivial;
    }
};

// Report-only diagnostics on raw inputs; never throws.
ValidationReport validate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& delta_l,
                          const Eigen::VectorXcd& delta_r, const SpectralMeasure& res_l,
                          const SpectralMeasure& res_r);
ValidationReport validate(const BlackBoxModel& model);

}  // namespace ebb
