#include "ebb/resolvent.hpp"

#include "ebb/quadrature.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace ebb {

namespace {

constexpr double kResonanceFloor = 1e-300;

void require_off_axis(Complex z, const char* where) {
    if (z.imag() == 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError(std::string(where) + ": z must be finite with Im z != 0");
}

// The uncoupled quantities entering the closed forms.
struct Uncoupled {
    Complex l, r;    // G_0(chi_l, chi_l), G_0(chi_r, chi_r)
    Complex a, b;    // G_0(delta_l, delta_l), G_0(delta_r, delta_r)
    Complex c, cbar; // G_0(delta_l, delta_r), G_0(delta_r, delta_l)
};

Uncoupled uncoupled(const BlackBoxModel& m, Complex z) {
    return {g0(m, Vec::chi_l, Vec::chi_l, z),   g0(m, Vec::chi_r, Vec::chi_r, z),
            g0(m, Vec::delta_l, Vec::delta_l, z), g0(m, Vec::delta_r, Vec::delta_r, z),
            g0(m, Vec::delta_l, Vec::delta_r, z), g0(m, Vec::delta_r, Vec::delta_l, z)};
}

Complex det_from(const Uncoupled& u, CouplingParams cp) {
    const double l2 = cp.lambda * cp.lambda;
    const double n2 = cp.nu * cp.nu;
    return (1.0 - n2 * u.r * u.b) * (1.0 - l2 * u.l * u.a) - n2 * l2 * u.r * u.l * u.c * u.cbar;
}

Eigen::Matrix4cd coupling_matrix(CouplingParams cp) {
    Eigen::Matrix4cd k = Eigen::Matrix4cd::Zero();
    k(index(Vec::delta_l), index(Vec::chi_l)) = cp.lambda;
    k(index(Vec::chi_l), index(Vec::delta_l)) = cp.lambda;
    k(index(Vec::delta_r), index(Vec::chi_r)) = cp.nu;
    k(index(Vec::chi_r), index(Vec::delta_r)) = cp.nu;
    return k;
}

void append_rule(const SpectralMeasure& mu, std::size_t n, std::vector<double>& x, std::vector<double>& sw) {
    for (const auto& a : mu.atoms()) {
        x.push_back(a.position);
        sw.push_back(std::sqrt(a.weight));
    }
    for (const auto& p : mu.pieces()) {
        const auto rule = quad::gauss_legendre(n, p.lo, p.hi);
        for (std::size_t j = 0; j < n; ++j) {
            x.push_back(rule.nodes[j]);
            sw.push_back(std::sqrt(std::max(0.0, rule.weights[j] * p(rule.nodes[j]))));
        }
    }
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void CouplingParams::check() const {
    if (!std::isfinite(lambda) || !std::isfinite(nu)) throw InvariantError("coupling constants must be finite");
}

Complex det_D(const BlackBoxModel& model, CouplingParams c, Complex z) {
    require_off_axis(z, "det_D");
    return det_from(uncoupled(model, z), c);
}

Complex green_closed_form(const BlackBoxModel& model, CouplingParams cp, Vec phi, Complex z) {
    require_off_axis(z, "green_closed_form");
    const Uncoupled u = uncoupled(model, z);
    const Complex d = det_from(u, cp);
    if (std::abs(d) < kResonanceFloor) throw NumericalError("D(z) underflows: z sits on a resonance", std::abs(d));
    const double l2 = cp.lambda * cp.lambda;
    const double n2 = cp.nu * cp.nu;
    switch (phi) {
        case Vec::delta_l: return ((1.0 - n2 * u.r * u.b) * u.a + n2 * u.r * u.c * u.cbar) / d;
        case Vec::chi_l: return u.l * (1.0 - n2 * u.r * u.b) / d;
        case Vec::delta_r: return ((1.0 - l2 * u.l * u.a) * u.b + l2 * u.l * u.cbar * u.c) / d;
        case Vec::chi_r: return u.r * (1.0 - l2 * u.l * u.a) / d;
    }
    return {};
}

Eigen::Matrix4cd green_matrix(const BlackBoxModel& model, CouplingParams cp, Complex z) {
    require_off_axis(z, "green_matrix");
    const Uncoupled u = uncoupled(model, z);
    const Complex d = det_from(u, cp);
    if (std::abs(d) < kResonanceFloor) throw NumericalError("D(z) underflows: z sits on a resonance", std::abs(d));
    const Eigen::Matrix4cd g0m = g0_matrix(model, z);
    const Eigen::Matrix4cd a = Eigen::Matrix4cd::Identity() + coupling_matrix(cp) * g0m;
    // G A = G0  <=>  A^T G^T = G0^T
    const Eigen::Matrix4cd gt = a.transpose().fullPivLu().solve(g0m.transpose());
    return gt.transpose();
}

Complex green(const BlackBoxModel& model, CouplingParams c, Vec phi, Vec psi, Complex z) {
    if (phi == psi) return green_closed_form(model, c, phi, z);
    return green_matrix(model, c, z)(index(phi), index(psi));
}

// ----------------------------------------------------------------------------

Eigen::VectorXcd DiscretizedModel::embed(Vec v) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim());
    const Eigen::Index n = system_dim();
    switch (v) {
        case Vec::delta_l: out.head(n) = delta_l; break;
        case Vec::delta_r: out.head(n) = delta_r; break;
        case Vec::chi_l: out.segment(n, nodes_l.size()) = chi_l.cast<Complex>(); break;
        case Vec::chi_r: out.segment(n + nodes_l.size(), nodes_r.size()) = chi_r.cast<Complex>(); break;
    }
    return out;
}

Eigen::SparseMatrix<Complex> DiscretizedModel::hamiltonian(CouplingParams c) const {
    const Eigen::Index n = system_dim();
    const Eigen::Index ml = nodes_l.size();
    const Eigen::Index mr = nodes_r.size();
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(n * n + (ml + mr) * (2 * n + 1)));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (h_system(i, j) != Complex{}) t.emplace_back(i, j, h_system(i, j));
    auto couple = [&](Eigen::Index offset, const Eigen::VectorXd& x, const Eigen::VectorXd& chi,
                      const Eigen::VectorXcd& delta, double g) {
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            const Eigen::Index row = offset + k;
            t.emplace_back(row, row, x(k));
            if (g == 0.0 || chi(k) == 0.0) continue;
            // g [ (chi, .) delta + (delta, .) chi ]
            for (Eigen::Index i = 0; i < n; ++i) {
                if (delta(i) == Complex{}) continue;
                t.emplace_back(i, row, g * delta(i) * chi(k));
                t.emplace_back(row, i, g * chi(k) * std::conj(delta(i)));
            }
        }
    };
    couple(n, nodes_l, chi_l, delta_l, c.lambda);
    couple(n + ml, nodes_r, chi_r, delta_r, c.nu);
    Eigen::SparseMatrix<Complex> h(dim(), dim());
    h.setFromTriplets(t.begin(), t.end());
    return h;
}

Eigen::MatrixXcd DiscretizedModel::dense_hamiltonian(CouplingParams c) const {
    return Eigen::MatrixXcd(hamiltonian(c));
}

DiscretizedModel discretize(const BlackBoxModel& model, std::size_t nodes_per_piece) {
    if (nodes_per_piece < 2) throw InvariantError("discretize: nodes_per_piece must be >= 2");
    DiscretizedModel d;
    d.h_system = model.system().hamiltonian();
    d.delta_l = model.system().delta(Vec::delta_l);
    d.delta_r = model.system().delta(Vec::delta_r);
    d.nodes_per_piece = nodes_per_piece;
    std::vector<double> x, sw;
    append_rule(model.reservoir_l(), nodes_per_piece, x, sw);
    d.nodes_l = to_eigen(x);
    d.chi_l = to_eigen(sw);
    x.clear();
    sw.clear();
    append_rule(model.reservoir_r(), nodes_per_piece, x, sw);
    d.nodes_r = to_eigen(x);
    d.chi_r = to_eigen(sw);
    return d;
}

Eigen::Matrix4cd green_oracle_matrix(const DiscretizedModel& disc, CouplingParams c, Complex z, OracleSolver solver) {
    require_off_axis(z, "green_oracle");
    const Eigen::Index dim = disc.dim();
    Eigen::MatrixXcd rhs(dim, 4);
    for (Vec v : kAllVecs) rhs.col(static_cast<Eigen::Index>(index(v))) = disc.embed(v);

    Eigen::MatrixXcd sol;
    if (solver == OracleSolver::sparse_lu) {
        Eigen::SparseMatrix<Complex> a = disc.hamiltonian(c);
        for (Eigen::Index k = 0; k < dim; ++k) a.coeffRef(k, k) -= z;
        a.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw NumericalError("sparse LU of H - z failed: " + lu.lastErrorMessage());
        sol = lu.solve(rhs);
        if (lu.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
    } else {
        Eigen::MatrixXcd a = disc.dense_hamiltonian(c);
        a.diagonal().array() -= z;
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        const double rcond = lu.rcond();
        if (!(rcond > std::numeric_limits<double>::epsilon()))
            throw NumericalError("dense LU of H - z is numerically singular", rcond);
        sol = lu.solve(rhs);
    }
    // (u, (H - z)^{-1} v) = rhs_u^* sol_v
    return rhs.adjoint() * sol;
}

Complex green_oracle(const DiscretizedModel& disc, CouplingParams c, Vec phi, Vec psi, Complex z,
                     OracleSolver solver) {
    return green_oracle_matrix(disc, c, z, solver)(index(phi), index(psi));
}

}  // namespace ebb
