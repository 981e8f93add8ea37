#include "ebb/certify.hpp"

#include <algorithm>
#include <cmath>

namespace ebb {

namespace {

constexpr double kSignTol = 1e-12;

}  // namespace

std::string_view name(CertVerdict v) noexcept {
    switch (v) {
        case CertVerdict::certified: return "CERTIFIED";
        case CertVerdict::out_of_scope: return "OUT_OF_SCOPE";
        case CertVerdict::numerically_unresolved: return "NUMERICALLY_UNRESOLVED";
    }
    return "?";
}

Certificate certify_no_sc(const BlackBoxModel& model, const ExceptionalSets& sets, CouplingParams coupling,
                          const std::vector<double>& grid, const CertifyOptions& opts) {
    coupling.check();
    Certificate cert;
    cert.coupling = coupling;
    const double l2 = coupling.lambda * coupling.lambda;
    const double n2 = coupling.nu * coupling.nu;

    for (double e : grid) {
        CertificatePoint pt;
        pt.energy = e;
        const auto cls = classify_energy(model, sets, e, std::nullopt, opts.classify);
        if (cls.in_sigma_hs || cls.near_pole || cls.in_S) {
            pt.note = cls.in_S ? "E in S" : "E in sigma(H_S)";
            cert.points.push_back(pt);
            continue;
        }
        if (cls.chi_l.status == BoundaryStatus::undetermined || cls.chi_r.status == BoundaryStatus::undetermined) {
            pt.verdict = CertVerdict::numerically_unresolved;
            pt.note = "reservoir boundary value undetermined";
            cert.points.push_back(pt);
            continue;
        }
        if (!(cls.in_Ml || cls.in_Mr)) {
            pt.note = "E outside M_l u M_r";
            cert.points.push_back(pt);
            continue;
        }
        pt.in_scope = true;

        const double a = g0(model, Vec::delta_l, Vec::delta_l, e).real();
        const double b = g0(model, Vec::delta_r, Vec::delta_r, e).real();
        const double c2 = std::norm(g0(model, Vec::delta_l, Vec::delta_r, e));
        const double d = d_function(model, e);
        const Complex l = *cls.chi_l.value;
        const Complex r = *cls.chi_r.value;

        const Complex dval = (1.0 - n2 * r * b) * (1.0 - l2 * l * a) - n2 * l2 * r * l * c2;
        pt.abs_D = std::abs(dval);
        pt.aux1_lhs = -n2 * c2 * r.imag();
        pt.aux1_rhs = l2 * l.imag() * std::norm(a - n2 * d * r);
        pt.aux2_lhs = -l2 * c2 * l.imag();
        pt.aux2_rhs = n2 * r.imag() * std::norm(b - l2 * d * l);

        pt.sign_structure_ok = pt.aux1_rhs >= -kSignTol && pt.aux2_rhs >= -kSignTol && pt.aux1_lhs <= kSignTol &&
                               pt.aux2_lhs <= kSignTol;
        if (!pt.sign_structure_ok) {
            pt.verdict = CertVerdict::numerically_unresolved;
            pt.note = "identity signs inconsistent with boundary data";
        } else if (*pt.abs_D <= opts.d_floor) {
            pt.verdict = CertVerdict::numerically_unresolved;
            pt.note = "|D(E+i0)| below d_floor";
        } else {
            pt.verdict = CertVerdict::certified;
        }
        cert.points.push_back(pt);
    }
    for (const auto& pt : cert.points) {
        switch (pt.verdict) {
            case CertVerdict::certified:
                ++cert.certified;
                cert.min_abs_D = std::min(cert.min_abs_D.value_or(*pt.abs_D), *pt.abs_D);
                break;
            case CertVerdict::out_of_scope: ++cert.out_of_scope; break;
            case CertVerdict::numerically_unresolved: ++cert.unresolved; break;
        }
    }
    return cert;
}

BlackBoxModel remark2_model() {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(1, 1);
    Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
    const auto res = SpectralMeasure::uniform({{-2.0, -1.0}, {1.0, 2.0}});
    return BlackBoxModel(SystemBlock(h, one, one), res, res);
}

BlackBoxModel t2_model(double t) {
    Eigen::MatrixXcd h(2, 2);
    h << 1.0, t, t, -1.0;
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(2);
    Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    const auto res = SpectralMeasure::uniform({{-2.0, -1.0}, {1.0, 2.0}});
    return BlackBoxModel(SystemBlock(h, e1, e2), res, res);
}

EigenResidual eigen_residual(const BlackBoxModel& model, CouplingParams coupling, std::size_t nodes_per_piece) {
    const auto& sys = model.system();
    const double tol = 1e-14;
    if (sys.dim() != 1 || std::abs(sys.hamiltonian()(0, 0)) > tol ||
        std::abs(sys.delta(Vec::delta_l)(0) - 1.0) > tol || std::abs(sys.delta(Vec::delta_r)(0) - 1.0) > tol) {
        throw UnsupportedScenario("eigen_residual needs H_S = 0 on C with delta_l = delta_r = 1");
    }
    for (const auto* mu : {&model.reservoir_l(), &model.reservoir_r()}) {
        if (mu->in_support(0.0))
            throw UnsupportedScenario("eigen_residual needs reservoirs supported away from 0");
    }
    const DiscretizedModel disc = discretize(model, nodes_per_piece);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(disc.dim());
    psi(0) = 1.0;
    const Eigen::Index ml = disc.nodes_l.size();
    for (Eigen::Index j = 0; j < ml; ++j) psi(1 + j) = -coupling.lambda * disc.chi_l(j) / disc.nodes_l(j);
    for (Eigen::Index j = 0; j < disc.nodes_r.size(); ++j)
        psi(1 + ml + j) = -coupling.nu * disc.chi_r(j) / disc.nodes_r(j);

    const Eigen::VectorXcd h_psi = disc.hamiltonian(coupling) * psi;
    const double norm = psi.norm();
    return {h_psi.norm() / norm, std::norm(psi(0)) / (norm * norm)};
}

}  // namespace ebb
