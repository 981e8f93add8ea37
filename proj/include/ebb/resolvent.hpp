// resolvent.hpp - coupled Green's functions G_{lambda,nu}(phi, psi, z) from
// the uncoupled ones, and a discretized full-matrix oracle for them.

#pragma once

#include "ebb/blackbox.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>

namespace ebb {

struct CouplingParams {
    double lambda = 0.0;
    double nu = 0.0;

    // Throws InvariantError unless both are finite.
    void check() const;
    CouplingParams mirrored() const noexcept { return {nu, lambda}; }
};

// D(z): the determinant of the rank-two coupling problem.
Complex det_D(const BlackBoxModel& model, CouplingParams c, Complex z);

// Closed forms for the diagonal pairs (phi, phi). Valid for Im z != 0.
Complex green_closed_form(const BlackBoxModel& model, CouplingParams c, Vec phi, Complex z);

/// All sixteen G_{lambda,nu}(u, v, z), indexed by Vec, from the second
/// resolvent identity G = G_0 - G K G_0 restricted to the four vectors
/// (K holds the couplings), i.e. one 4x4 solve G (I + K G_0) = G_0.
/// Throws NumericalError when |D(z)| underflows (z on a resonance).
Eigen::Matrix4cd green_matrix(const BlackBoxModel& model, CouplingParams c, Complex z);

// Single entry; diagonal pairs use the closed forms, the rest the 4x4 solve.
Complex green(const BlackBoxModel& model, CouplingParams c, Vec phi, Vec psi, Complex z);

/// Finite-dimensional stand-in for the full model. Each reservoir density
/// piece is replaced by Gauss-Legendre nodes carrying weights w_j = g_j p(x_j)
/// (atoms are kept as nodes with their weights); the reservoir Hamiltonian is
/// diag(x_j) and chi has entries sqrt(w_j). Basis order: system, left, right.
struct DiscretizedModel {
    Eigen::MatrixXcd h_system;
    Eigen::VectorXcd delta_l;
    Eigen::VectorXcd delta_r;
    Eigen::VectorXd nodes_l;
    Eigen::VectorXd nodes_r;
    Eigen::VectorXd chi_l;  // sqrt of node weights
    Eigen::VectorXd chi_r;
    std::size_t nodes_per_piece = 0;
    std::string rule = "gauss-legendre";

    Eigen::Index system_dim() const noexcept { return h_system.rows(); }
    Eigen::Index dim() const noexcept { return h_system.rows() + nodes_l.size() + nodes_r.size(); }
    // The distinguished vector embedded in the full space.
    Eigen::VectorXcd embed(Vec v) const;
    Eigen::SparseMatrix<Complex> hamiltonian(CouplingParams c) const;
    Eigen::MatrixXcd dense_hamiltonian(CouplingParams c) const;
};

// Requires nodes_per_piece >= 2.
DiscretizedModel discretize(const BlackBoxModel& model, std::size_t nodes_per_piece);

enum class OracleSolver { sparse_lu, dense_lu };

// [ (u, (H - z)^{-1} v) ] for the four embedded vectors, by a direct solve
// of the assembled matrix. Requires Im z != 0.
Eigen::Matrix4cd green_oracle_matrix(const DiscretizedModel& disc, CouplingParams c, Complex z,
                                     OracleSolver solver = OracleSolver::sparse_lu);

Complex green_oracle(const DiscretizedModel& disc, CouplingParams c, Vec phi, Vec psi, Complex z,
                     OracleSolver solver = OracleSolver::sparse_lu);

}  // namespace ebb
