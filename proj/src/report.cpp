// report.cpp - CSV and JSON emission.

#include "ebb/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ebb {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }
json opt(const std::optional<Complex>& z) { return z ? to_json(*z) : json(nullptr); }
json opt(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

std::string format_opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> fields) {
    if (fields.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match header");
    rows_.push_back(std::move(fields));
}

std::string CsvTable::quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string q = "\"";
    for (char ch : field) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + '"';
}

std::string CsvTable::str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& f) {
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << quote(f[i]);
        os << "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const ValidationReport& r) {
    return {{"hermiticity_residual", r.hermiticity_residual},
            {"hermitian", r.hermitian},
            {"deltas_nonzero", r.deltas_nonzero},
            {"vanish_condition", r.vanish_condition},
            {"cyclic_rank", r.cyclic_rank},
            {"dim", r.dim},
            {"cyclic", r.cyclic()},
            {"reservoir_l_nontrivial", r.reservoir_l_nontrivial},
            {"reservoir_r_nontrivial", r.reservoir_r_nontrivial},
            {"d_degenerate", r.d_degenerate},
            {"passed", r.passed()},
            {"messages", r.messages}};
}

json to_json(const ExceptionalSets& s) {
    return {{"sigma_hs", s.sigma_hs},
            {"S", s.S},
            {"N", s.n_degenerate ? json(nullptr) : json(s.N)},
            {"n_degenerate", s.n_degenerate},
            {"n_outside_sigma", s.n_degenerate ? json(nullptr) : json(s.n_outside_sigma())}};
}

json to_json(const BoundaryRecord& r, bool with_trace) {
    json j{{"energy", r.energy},         {"status", std::string(name(r.status))},
           {"value", opt(r.value)},      {"im_limit", opt(r.im_limit)},
           {"pole_weight", opt(r.pole_weight)}, {"slope", r.slope},
           {"note", r.note}};
    if (with_trace) {
        json t = json::array();
        for (const auto& [eps, v] : r.trace) t.push_back({{"eps", eps}, {"value", to_json(v)}});
        j["trace"] = t;
    }
    return j;
}

json to_json(const EnergyClassification& c) {
    json cs = json::array();
    for (const auto& d : c.c_sets)
        cs.push_back({{"phi", std::string(name(d.phi))},
                      {"applicable", d.applicable},
                      {"chi_l_condition", d.chi_l_condition},
                      {"chi_r_condition", d.chi_r_condition},
                      {"target", opt(d.target)},
                      {"met", d.met()}});
    return {{"energy", c.energy},   {"in_M0", c.in_M0},         {"in_Ml", c.in_Ml},
            {"in_Mr", c.in_Mr},     {"in_sigma_hs", c.in_sigma_hs}, {"in_S", c.in_S},
            {"in_N", opt(c.in_N)},  {"near_pole", c.near_pole}, {"chi_l", to_json(c.chi_l)},
            {"chi_r", to_json(c.chi_r)}, {"nu", opt(c.nu)},     {"c_sets", cs}};
}

json to_json(const AbsContinuityReport& r) {
    json pts = json::array();
    for (const auto& p : r.points)
        pts.push_back({{"energy", p.energy},
                       {"phi", std::string(name(p.phi))},
                       {"verdict", std::string(name(p.verdict))},
                       {"status", std::string(name(p.status))},
                       {"limit", opt(p.limit)}});
    json atoms = json::array();
    for (const auto& a : r.atoms)
        atoms.push_back({{"energy", a.energy},
                         {"phi", std::string(name(a.phi))},
                         {"value", a.value},
                         {"converged", a.converged}});
    return {{"kappa", r.kappa},     {"verdict", std::string(name(r.verdict))},
            {"excluded", r.excluded}, {"divergent", r.divergent},
            {"undetermined", r.undetermined}, {"points", pts},
            {"atoms", atoms}};
}

json to_json(const CertificatePoint& p) {
    return {{"energy", p.energy},       {"in_scope", p.in_scope},   {"abs_D", opt(p.abs_D)},
            {"aux1_lhs", p.aux1_lhs},   {"aux1_rhs", p.aux1_rhs},   {"aux2_lhs", p.aux2_lhs},
            {"aux2_rhs", p.aux2_rhs},   {"sign_structure_ok", p.sign_structure_ok},
            {"verdict", std::string(name(p.verdict))}, {"note", p.note}};
}

json to_json(const Certificate& c) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(to_json(p));
    return {{"lambda", c.coupling.lambda}, {"nu", c.coupling.nu},       {"min_abs_D", opt(c.min_abs_D)},
            {"certified", c.certified},    {"out_of_scope", c.out_of_scope}, {"unresolved", c.unresolved},
            {"points", pts}};
}

}  // namespace ebb
