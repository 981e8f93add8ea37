#include "ebb/certify.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace ebb;

namespace {

std::vector<double> bands_grid(int per_band) {
    std::vector<double> g;
    for (int k = 0; k < per_band; ++k) g.push_back(1.05 + 0.9 * k / (per_band - 1));
    for (int k = 0; k < per_band; ++k) g.push_back(-1.95 + 0.9 * k / (per_band - 1));
    return g;
}

}  // namespace

TEST_CASE("scalar model at 1.5 is certified with strict opposite signs") {
    const auto m = remark2_model();
    const auto cert = certify_no_sc(m, exceptional_sets(m), {1, 1}, {1.5});
    REQUIRE(cert.points.size() == 1);
    const auto& p = cert.points[0];
    CHECK(p.verdict == CertVerdict::certified);
    CHECK(p.in_scope);
    CHECK(p.aux1_lhs < 0.0);
    CHECK(p.aux1_rhs > 0.0);
    CHECK(p.aux2_lhs < 0.0);
    CHECK(p.aux2_rhs > 0.0);
    REQUIRE(cert.min_abs_D.has_value());
}

TEST_CASE("zero coupling certifies with |D| = 1") {
    const auto m = remark2_model();
    const auto cert = certify_no_sc(m, exceptional_sets(m), {0, 0}, {-1.5, 1.2, 1.7});
    for (const auto& p : cert.points) {
        CHECK(p.verdict == CertVerdict::certified);
        CHECK(*p.abs_D == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("the eigenvalue of the scalar system is out of scope") {
    const auto m = remark2_model();
    const auto cert = certify_no_sc(m, exceptional_sets(m), {1, 1}, {0.0, 0.5, 3.0});
    for (const auto& p : cert.points) CHECK(p.verdict == CertVerdict::out_of_scope);
    CHECK(cert.out_of_scope == 3);
}

TEST_CASE("sign structure at every certified point") {
    const auto m = t2_model(0.5);
    const auto sets = exceptional_sets(m);
    const auto cert = certify_no_sc(m, sets, {0.7, 1.3}, bands_grid(25));
    CHECK(cert.certified > 0);
    for (const auto& p : cert.points) {
        if (p.verdict != CertVerdict::certified) continue;
        CHECK(p.aux1_rhs >= -1e-12);
        CHECK(p.aux2_rhs >= -1e-12);
        CHECK(p.aux1_lhs <= 1e-12);
        CHECK(p.aux2_lhs <= 1e-12);
        if (std::abs(g0(m, Vec::delta_l, Vec::delta_r, p.energy)) > 1e-6)
            CHECK(std::min(p.aux1_lhs, p.aux2_lhs) < -1e-10);
    }
}

TEST_CASE("refining the ladder never demotes a certified point") {
    const auto m = t2_model(0.5);
    const auto sets = exceptional_sets(m);
    CertifyOptions fine;
    fine.classify.ladder.eps_min = 1e-11;
    const auto a = certify_no_sc(m, sets, {1, 1}, bands_grid(25));
    const auto b = certify_no_sc(m, sets, {1, 1}, bands_grid(25), fine);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if (a.points[i].verdict == CertVerdict::certified) CHECK(b.points[i].verdict != CertVerdict::out_of_scope);
}

TEST_CASE("scalar model eigenvector") {
    const auto m = remark2_model();
    const auto a = eigen_residual(m, {1, 1}, 200);
    CHECK(a.residual <= 1e-10);
    CHECK(std::abs(a.weight_estimate - 1.0 / 3.0) <= 1e-4);
    const auto b = eigen_residual(m, {0, 0}, 20);
    CHECK(b.residual == 0.0);
    CHECK(b.weight_estimate == doctest::Approx(1.0));
    CHECK(std::abs(eigen_residual(m, {2, 0}, 200).weight_estimate - 0.2) <= 1e-4);
    CHECK_THROWS_AS((void)eigen_residual(t2_model(), {1, 1}, 20), UnsupportedScenario);
}

TEST_CASE("eigenvector weight and extracted point mass agree") {
    const auto m = remark2_model();
    for (CouplingParams c : {CouplingParams{1, 1}, CouplingParams{2, 0}, CouplingParams{1, 3}}) {
        const double w = eigen_residual(m, c, 200).weight_estimate;
        const auto pm = point_mass(m, c, Vec::delta_l, 0.0);
        CHECK(pm.converged);
        CHECK(std::abs(w - pm.weight) <= 1e-4);
    }
}

TEST_CASE("validate on the shipped models") {
    const auto r = validate(remark2_model());
    CHECK(r.passed());
    CHECK(r.d_degenerate);
    const auto s = exceptional_sets(remark2_model());
    CHECK(s.sigma_hs == std::vector<double>{0.0});
    CHECK(s.S.empty());
    CHECK(s.n_degenerate);
    CHECK(std::abs(g0(remark2_model(), Vec::delta_l, Vec::delta_l, {0, 2}) - Complex(0, 0.5)) <= 1e-15);
}
