#include "ebb/blackbox.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ebb {

namespace {

constexpr double kLevelMergeTol = 1e-10;
constexpr double kPoleTol = 1e-12;
constexpr double kCyclicRankTol = 1e-8;

std::size_t pair_slot(Vec phi, Vec psi) {
    return (phi == Vec::delta_l ? 0 : 2) + (psi == Vec::delta_l ? 0 : 1);
}

// prod_{j in levels, j != skip} (E_j - E)
poly::ComplexPoly product_except(const std::vector<double>& energies, std::size_t skip) {
    poly::ComplexPoly p{1.0};
    for (std::size_t j = 0; j < energies.size(); ++j) {
        if (j == skip) continue;
        p = poly::multiply(p, poly::ComplexPoly{energies[j], -1.0});
    }
    return p;
}

struct Rational {
    poly::ComplexPoly num;
    std::vector<double> poles;  // denominator prod (E_k - E) over these
};

// Partial fractions sum_k c_k / (E_k - E) over levels with |c_k| > tol.
Rational rational_form(const SystemBlock& sys, Vec phi, Vec psi, bool active_only) {
    const auto& levels = sys.levels();
    const double tol = 1e-13 * sys.delta(phi).norm() * sys.delta(psi).norm();
    std::vector<double> poles;
    std::vector<Complex> res;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const Complex c = sys.residue(k, phi, psi);
        if (active_only && std::abs(c) <= tol) continue;
        poles.push_back(levels[k].energy);
        res.push_back(c);
    }
    Rational r{poly::ComplexPoly{0.0}, poles};
    for (std::size_t k = 0; k < poles.size(); ++k) {
        poly::ComplexPoly term = product_except(poles, k);
        for (auto& t : term) t *= res[k];
        r.num = poly::add(r.num, term);
    }
    return r;
}

Complex eval_rational(const Rational& r, double e) {
    Complex den = 1.0;
    for (double p : r.poles) den *= (p - e);
    return poly::evaluate(r.num, e) / den;
}

bool near_any(const std::vector<double>& xs, double e, double tol) {
    return std::any_of(xs.begin(), xs.end(), [&](double x) { return std::abs(x - e) <= tol; });
}

}  // namespace

std::string_view name(Vec v) noexcept {
    switch (v) {
        case Vec::chi_l: return "chi_l";
        case Vec::chi_r: return "chi_r";
        case Vec::delta_l: return "delta_l";
        case Vec::delta_r: return "delta_r";
    }
    return "?";
}

std::optional<Vec> parse_vec(std::string_view s) noexcept {
    for (Vec v : kAllVecs)
        if (name(v) == s) return v;
    return std::nullopt;
}

Vec mirror(Vec v) noexcept {
    switch (v) {
        case Vec::chi_l: return Vec::chi_r;
        case Vec::chi_r: return Vec::chi_l;
        case Vec::delta_l: return Vec::delta_r;
        case Vec::delta_r: return Vec::delta_l;
    }
    return v;
}

// ----------------------------------------------------------------------------

SystemBlock::SystemBlock(Eigen::MatrixXcd h, Eigen::VectorXcd delta_l, Eigen::VectorXcd delta_r)
    : h_(std::move(h)), delta_l_(std::move(delta_l)), delta_r_(std::move(delta_r)) {
    if (h_.rows() == 0 || h_.rows() != h_.cols()) throw InvariantError("system matrix must be square and non-empty");
    if (delta_l_.size() != h_.rows() || delta_r_.size() != h_.rows())
        throw InvariantError("delta vectors must match the system dimension");
    if (!h_.allFinite() || !delta_l_.allFinite() || !delta_r_.allFinite())
        throw InvariantError("system data must be finite");
    norm_ = h_.norm();
    herm_residual_ = (h_ - h_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_residual_ > 1e-14 * std::max(1.0, norm_)) {
        std::ostringstream os;
        os << "system matrix is not Hermitian (max |H - H^*| = " << herm_residual_ << ")";
        throw InvariantError(os.str());
    }
    if (delta_l_.norm() == 0.0) throw InvariantError("delta_l must be nonzero");
    if (delta_r_.norm() == 0.0) throw InvariantError("delta_r must be nonzero");

    const Eigen::MatrixXcd sym = 0.5 * (h_ + h_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of the system block failed");
    evals_ = solver.eigenvalues();
    evecs_ = solver.eigenvectors();
    for (Eigen::Index k = 0; k < evals_.size(); ++k) {
        const double r = (h_ * evecs_.col(k) - evals_(k) * evecs_.col(k)).norm();
        if (r > 1e-12 * std::max(1.0, norm_)) throw NumericalError("eigenpair residual too large", r);
    }

    const double merge = kLevelMergeTol * std::max(1.0, norm_);
    for (Eigen::Index k = 0; k < evals_.size(); ++k) {
        if (!levels_.empty() && evals_(k) - levels_.back().energy <= merge) {
            auto& lv = levels_.back();
            lv.members.push_back(k);
            double mean = 0.0;
            for (auto m : lv.members) mean += evals_(m);
            lv.energy = mean / static_cast<double>(lv.members.size());
        } else {
            levels_.push_back({evals_(k), {k}});
        }
    }
}

const Eigen::VectorXcd& SystemBlock::delta(Vec v) const {
    if (v == Vec::delta_l) return delta_l_;
    if (v == Vec::delta_r) return delta_r_;
    throw std::invalid_argument("SystemBlock::delta: not a system vector");
}

Complex SystemBlock::residue(std::size_t level, Vec phi, Vec psi) const {
    const auto& a = delta(phi);
    const auto& b = delta(psi);
    Complex c{};
    for (auto k : levels_.at(level).members) {
        const auto e = evecs_.col(k);
        c += a.dot(e) * e.dot(b);  // dot() conjugates its left operand
    }
    return c;
}

// ----------------------------------------------------------------------------

BlackBoxModel::BlackBoxModel(SystemBlock system, SpectralMeasure res_l, SpectralMeasure res_r)
    : system_(std::move(system)), res_l_(std::move(res_l)), res_r_(std::move(res_r)) {
    const auto& levels = system_.levels();
    std::vector<double> energies;
    for (const auto& lv : levels) energies.push_back(lv.energy);

    denominator_ = {1.0};
    for (double e : energies) denominator_ = poly::multiply(denominator_, poly::RealPoly{e, -1.0});

    for (Vec phi : {Vec::delta_l, Vec::delta_r}) {
        for (Vec psi : {Vec::delta_l, Vec::delta_r}) {
            numerators_[pair_slot(phi, psi)] = rational_form(system_, phi, psi, false).num;
        }
    }
    const double tol = 1e-13 * system_.delta(Vec::delta_l).norm() * system_.delta(Vec::delta_r).norm();
    bool any = false;
    for (std::size_t k = 0; k < levels.size(); ++k)
        any = any || std::abs(system_.residue(k, Vec::delta_l, Vec::delta_r)) > tol;
    if (!any)
        throw InvariantError(
            "G_0(delta_l, delta_r, E) vanishes identically: the system decouples into two independent parts");
}

const SpectralMeasure& BlackBoxModel::reservoir(Vec chi) const {
    if (chi == Vec::chi_l) return res_l_;
    if (chi == Vec::chi_r) return res_r_;
    throw std::invalid_argument("BlackBoxModel::reservoir: not a reservoir vector");
}

BlackBoxModel BlackBoxModel::mirrored() const {
    SystemBlock sys(system_.hamiltonian(), system_.delta(Vec::delta_r), system_.delta(Vec::delta_l));
    return BlackBoxModel(std::move(sys), res_r_, res_l_);
}

const poly::ComplexPoly& BlackBoxModel::numerator(Vec phi, Vec psi) const {
    if (!is_system_vec(phi) || !is_system_vec(psi))
        throw std::invalid_argument("numerator: only system vector pairs are rational");
    return numerators_[pair_slot(phi, psi)];
}

// ----------------------------------------------------------------------------

Complex g0(const BlackBoxModel& model, Vec phi, Vec psi, Complex z) {
    if (is_system_vec(phi) != is_system_vec(psi)) return 0.0;
    if (!is_system_vec(phi)) {
        if (phi != psi) return 0.0;
        return model.reservoir(phi).borel(z);
    }
    const auto& sys = model.system();
    const auto& levels = sys.levels();
    Complex sum{};
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const double ek = levels[k].energy;
        if (z.imag() == 0.0 && std::abs(z.real() - ek) <= kPoleTol * std::max(1.0, std::abs(ek))) {
            throw PoleError("G_0(" + std::string(name(phi)) + ", " + std::string(name(psi)) +
                                ") evaluated at eigenvalue " + std::to_string(ek) + " of H_S",
                            k, ek);
        }
        sum += sys.residue(k, phi, psi) / (ek - z);
    }
    return sum;
}

Eigen::Matrix4cd g0_matrix(const BlackBoxModel& model, Complex z) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(index(Vec::chi_l), index(Vec::chi_l)) = g0(model, Vec::chi_l, Vec::chi_l, z);
    m(index(Vec::chi_r), index(Vec::chi_r)) = g0(model, Vec::chi_r, Vec::chi_r, z);
    for (Vec a : {Vec::delta_l, Vec::delta_r})
        for (Vec b : {Vec::delta_l, Vec::delta_r}) m(index(a), index(b)) = g0(model, a, b, z);
    return m;
}

double d_function(const BlackBoxModel& model, double energy) {
    const Complex a = g0(model, Vec::delta_l, Vec::delta_l, energy);
    const Complex b = g0(model, Vec::delta_r, Vec::delta_r, energy);
    const Complex c = g0(model, Vec::delta_l, Vec::delta_r, energy);
    const Complex cr = g0(model, Vec::delta_r, Vec::delta_l, energy);
    const Complex d = a * b - c * cr;
    if (std::abs(d.imag()) > 1e-12 * std::max(1.0, std::abs(a * b) + std::abs(c * cr)))
        throw NumericalError("d(E) has a non-negligible imaginary part", d.imag());
    return d.real();
}

// ----------------------------------------------------------------------------

bool ExceptionalSets::in_sigma(double e, double tol) const { return near_any(sigma_hs, e, tol); }
bool ExceptionalSets::in_S(double e, double tol) const { return near_any(S, e, tol); }

std::optional<bool> ExceptionalSets::in_N(double e, double tol) const {
    if (n_degenerate) return std::nullopt;
    return near_any(N, e, tol);
}

std::vector<double> ExceptionalSets::n_outside_sigma(double tol) const {
    std::vector<double> out;
    for (double x : N)
        if (!near_any(sigma_hs, x, tol)) out.push_back(x);
    return out;
}

ExceptionalSets exceptional_sets(const BlackBoxModel& model) {
    const auto& sys = model.system();
    ExceptionalSets out;
    for (const auto& lv : sys.levels()) out.sigma_hs.push_back(lv.energy);
    const double sigma_tol = 1e-9 * std::max(1.0, sys.norm());

    // S: zeros of the reduced numerator of G_0(delta_l, delta_r, .).
    const Rational c_act = rational_form(sys, Vec::delta_l, Vec::delta_r, true);
    const double c_scale = sys.delta(Vec::delta_l).norm() * sys.delta(Vec::delta_r).norm();
    for (double r : poly::real_roots(c_act.num)) {
        if (std::abs(eval_rational(c_act, r)) <= 1e-10 * std::max(1.0, c_scale)) out.S.push_back(r);
    }

    // N: sigma(H_S) plus zeros of a, b, G_0(dl, dr) and d off sigma(H_S).
    const Rational a_all = rational_form(sys, Vec::delta_l, Vec::delta_l, false);
    const Rational b_all = rational_form(sys, Vec::delta_r, Vec::delta_r, false);
    const Rational c_all = rational_form(sys, Vec::delta_l, Vec::delta_r, false);
    const poly::ComplexPoly ab = poly::multiply(a_all.num, b_all.num);
    const poly::ComplexPoly cc = poly::multiply(c_all.num, poly::conjugate(c_all.num));
    const poly::ComplexPoly d_num = poly::subtract(ab, cc);
    const double d_scale = std::max(poly::coefficient_scale(ab), poly::coefficient_scale(cc));
    out.n_degenerate = poly::is_negligible(d_num, 1e-13 * d_scale);

    std::vector<double> n_pts = out.sigma_hs;
    auto add_zeros = [&](const poly::ComplexPoly& num, auto&& residual_ok) {
        for (double r : poly::real_roots(num)) {
            if (near_any(out.sigma_hs, r, sigma_tol)) continue;
            if (residual_ok(r)) n_pts.push_back(r);
        }
    };
    auto g0_small = [&](Vec p, Vec q) {
        const double scale = sys.delta(p).norm() * sys.delta(q).norm();
        return [&model, p, q, scale](double r) {
            return std::abs(g0(model, p, q, r)) <= 1e-10 * std::max(1.0, scale);
        };
    };
    add_zeros(a_all.num, g0_small(Vec::delta_l, Vec::delta_l));
    add_zeros(b_all.num, g0_small(Vec::delta_r, Vec::delta_r));
    add_zeros(c_all.num, g0_small(Vec::delta_l, Vec::delta_r));
    if (!out.n_degenerate) {
        add_zeros(d_num, [&](double r) {
            const double a = g0(model, Vec::delta_l, Vec::delta_l, r).real();
            const double b = g0(model, Vec::delta_r, Vec::delta_r, r).real();
            return std::abs(d_function(model, r)) <= 1e-10 * std::max(1.0, std::abs(a * b));
        });
    }
    std::sort(n_pts.begin(), n_pts.end());
    for (double x : n_pts)
        if (out.N.empty() || std::abs(x - out.N.back()) > sigma_tol) out.N.push_back(x);
    return out;
}

// ----------------------------------------------------------------------------

ValidationReport validate(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& delta_l, const Eigen::VectorXcd& delta_r,
                          const SpectralMeasure& res_l, const SpectralMeasure& res_r) {
    ValidationReport rep;
    rep.dim = static_cast<std::size_t>(h.rows());
    rep.reservoir_l_nontrivial = res_l.total_mass() > 0.0;
    rep.reservoir_r_nontrivial = res_r.total_mass() > 0.0;
    if (!rep.reservoir_l_nontrivial) rep.messages.push_back("left reservoir measure is zero");
    if (!rep.reservoir_r_nontrivial) rep.messages.push_back("right reservoir measure is zero");
    if (h.rows() == 0 || h.rows() != h.cols() || delta_l.size() != h.rows() || delta_r.size() != h.rows()) {
        rep.messages.push_back("inconsistent system dimensions");
        return rep;
    }
    rep.hermiticity_residual = (h - h.adjoint()).cwiseAbs().maxCoeff();
    rep.hermitian = rep.hermiticity_residual <= 1e-14 * std::max(1.0, h.norm());
    if (!rep.hermitian) rep.messages.push_back("system matrix is not Hermitian");
    rep.deltas_nonzero = delta_l.norm() > 0.0 && delta_r.norm() > 0.0;
    if (!rep.deltas_nonzero) rep.messages.push_back("delta vectors must be nonzero");
    if (!rep.hermitian || !rep.deltas_nonzero) return rep;

    try {
        SystemBlock sys(h, delta_l, delta_r);
        // Dimension of the H_S-cyclic span of {delta_l, delta_r}: per eigenspace,
        // the rank of the two projected vectors.
        const double rank_tol = kCyclicRankTol * std::max(delta_l.norm(), delta_r.norm());
        for (const auto& lv : sys.levels()) {
            Eigen::MatrixXcd proj(static_cast<Eigen::Index>(lv.members.size()), 2);
            for (std::size_t i = 0; i < lv.members.size(); ++i) {
                const auto e = sys.eigenvectors().col(lv.members[i]);
                proj(static_cast<Eigen::Index>(i), 0) = e.dot(delta_l);
                proj(static_cast<Eigen::Index>(i), 1) = e.dot(delta_r);
            }
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(proj);
            for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
                if (svd.singularValues()(k) > rank_tol) ++rep.cyclic_rank;
        }
        if (!rep.cyclic()) rep.messages.push_back("{delta_l, delta_r} is not cyclic for H_S (informational)");

        BlackBoxModel model(std::move(sys), res_l, res_r);
        rep.vanish_condition = true;
        rep.d_degenerate = exceptional_sets(model).n_degenerate;
        if (rep.d_degenerate) rep.messages.push_back("d(E) vanishes identically: N is the whole line");
    } catch (const InvariantError& e) {
        rep.messages.push_back(e.what());
    } catch (const std::exception& e) {
        rep.messages.push_back(std::string("validation error: ") + e.what());
    }
    return rep;
}

ValidationReport validate(const BlackBoxModel& model) {
    const auto& sys = model.system();
    return validate(sys.hamiltonian(), sys.delta(Vec::delta_l), sys.delta(Vec::delta_r), model.reservoir_l(),
                    model.reservoir_r());
}

}  // namespace ebb
