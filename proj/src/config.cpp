// config.cpp - RunConfig parsing and normalization.

#include "ebb/config.hpp"

#include "ebb/certify.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ebb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

double positive(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0)) fail(path, "must be positive");
    return v;
}

std::size_t count(const json& j, const std::string& path, std::size_t min) {
    if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min))
        fail(path, "expected an integer >= " + std::to_string(min));
    return j.get<std::size_t>();
}

Complex complex_value(const json& j, const std::string& path) {
    if (j.is_number()) return {number(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) fail(path, "expected a [re, im] pair");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

Eigen::VectorXcd complex_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of [re, im] pairs");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_value(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

Eigen::MatrixXcd complex_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(rp, "matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c)
            m(r, c) = complex_value(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
    }
    return m;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_to_json(const Eigen::VectorXcd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
    return a;
}

void check_hermitian(const Eigen::MatrixXcd& h, const std::string& path) {
    const double scale = std::max(1.0, h.norm());
    const double res = (h - h.adjoint()).norm();
    if (res > 1e-14 * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian (|H - H*| = " << res << ")";
        fail(path, os.str());
    }
}

std::vector<double> parse_grid(const json& j, const std::string& path) {
    std::vector<double> out;
    if (j.is_object()) {
        for (const char* k : {"start", "stop", "points"})
            if (!j.contains(k)) fail(path + "." + k, "missing");
        const double a = number(j["start"], path + ".start");
        const double b = number(j["stop"], path + ".stop");
        return linspace(a, b, count(j["points"], path + ".points", 1));
    }
    if (!j.is_array() || j.empty()) fail(path, "expected {start, stop, points} or a non-empty list");
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string ip = path + "[" + std::to_string(i) + "]";
        if (j[i].is_object()) {
            auto seg = parse_grid(j[i], ip);
            out.insert(out.end(), seg.begin(), seg.end());
        } else {
            out.push_back(number(j[i], ip));
        }
    }
    return out;
}

}  // namespace

BlackBoxModel ModelData::build() const {
    if (preset == "remark2") return remark2_model();
    if (preset == "t2") return t2_model(t2_hopping);
    try {
        return BlackBoxModel(SystemBlock(h, delta_l, delta_r), res_l, res_r);
    } catch (const InvariantError& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) throw ConfigError("grid: points must be >= 1");
    if (n == 1) return {a};
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    g.back() = b;
    return g;
}

std::vector<double> parse_grid_literal(const std::string& s) {
    const auto p1 = s.find(':');
    const auto p2 = p1 == std::string::npos ? p1 : s.find(':', p1 + 1);
    if (p2 == std::string::npos) throw ConfigError("--grid: expected a:b:n");
    try {
        std::size_t used = 0;
        const double a = std::stod(s.substr(0, p1), &used);
        const double b = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
        const long n = std::stol(s.substr(p2 + 1));
        if (n < 1) throw ConfigError("--grid: n must be >= 1");
        return linspace(a, b, static_cast<std::size_t>(n));
    } catch (const std::logic_error&) {
        throw ConfigError("--grid: expected a:b:n");
    }
}

SpectralMeasure parse_measure(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected {atoms, pieces}");
    std::vector<Atom> atoms;
    std::vector<DensityPiece> pieces;
    if (j.contains("atoms")) {
        const auto& a = j["atoms"];
        if (!a.is_array()) fail(path + ".atoms", "expected a list of [position, weight]");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string ip = path + ".atoms[" + std::to_string(i) + "]";
            if (!a[i].is_array() || a[i].size() != 2) fail(ip, "expected [position, weight]");
            atoms.push_back({number(a[i][0], ip + "[0]"), positive(a[i][1], ip + "[1]")});
        }
    }
    if (j.contains("pieces")) {
        const auto& p = j["pieces"];
        if (!p.is_array()) fail(path + ".pieces", "expected a list");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::string ip = path + ".pieces[" + std::to_string(i) + "]";
            if (!p[i].is_object() || !p[i].contains("interval") || !p[i].contains("poly"))
                fail(ip, "expected {interval: [a, b], poly: [c0, ...]}");
            const auto& iv = p[i]["interval"];
            if (!iv.is_array() || iv.size() != 2) fail(ip + ".interval", "expected [a, b]");
            const double lo = number(iv[0], ip + ".interval[0]");
            const double hi = number(iv[1], ip + ".interval[1]");
            if (!(lo < hi)) fail(ip + ".interval", "requires a < b");
            const auto& pc = p[i]["poly"];
            if (!pc.is_array() || pc.empty()) fail(ip + ".poly", "expected a non-empty coefficient list");
            std::vector<double> coeffs;
            for (std::size_t k = 0; k < pc.size(); ++k)
                coeffs.push_back(number(pc[k], ip + ".poly[" + std::to_string(k) + "]"));
            pieces.push_back({lo, hi, std::move(coeffs)});
        }
    }
    try {
        return SpectralMeasure(std::move(atoms), std::move(pieces));
    } catch (const InvariantError& e) {
        fail(path, e.what());
    }
}

json measure_to_json(const SpectralMeasure& mu) {
    json atoms = json::array();
    for (const auto& a : mu.atoms()) atoms.push_back(json::array({a.position, a.weight}));
    json pieces = json::array();
    for (const auto& p : mu.pieces())
        pieces.push_back({{"interval", json::array({p.lo, p.hi})}, {"poly", p.coeffs}});
    return {{"atoms", atoms}, {"pieces", pieces}};
}

RunConfig parse_config(const json& j) {
    if (!j.is_object()) fail("$", "config must be a JSON object");
    RunConfig c;

    if (!j.contains("model")) fail("model", "missing");
    const auto& m = j["model"];
    if (!m.is_object()) fail("model", "expected an object");
    if (m.contains("preset")) {
        if (!m["preset"].is_string()) fail("model.preset", "expected a string");
        c.model.preset = m["preset"].get<std::string>();
        if (c.model.preset != "remark2" && c.model.preset != "t2")
            fail("model.preset", "unknown preset '" + c.model.preset + "' (remark2, t2)");
        if (m.contains("t")) c.model.t2_hopping = number(m["t"], "model.t");
        const auto b = c.model.build();
        c.model.h = b.system().hamiltonian();
        c.model.delta_l = b.system().delta(Vec::delta_l);
        c.model.delta_r = b.system().delta(Vec::delta_r);
        c.model.res_l = b.reservoir_l();
        c.model.res_r = b.reservoir_r();
    } else {
        for (const char* k : {"system", "delta_l", "delta_r", "reservoir_l", "reservoir_r"})
            if (!m.contains(k)) fail(std::string("model.") + k, "missing");
        c.model.h = complex_matrix(m["system"], "model.system");
        check_hermitian(c.model.h, "model.system");
        c.model.delta_l = complex_vector(m["delta_l"], "model.delta_l");
        c.model.delta_r = complex_vector(m["delta_r"], "model.delta_r");
        if (c.model.delta_l.size() != c.model.h.rows()) fail("model.delta_l", "size does not match the system");
        if (c.model.delta_r.size() != c.model.h.rows()) fail("model.delta_r", "size does not match the system");
        c.model.res_l = parse_measure(m["reservoir_l"], "model.reservoir_l");
        c.model.res_r = parse_measure(m["reservoir_r"], "model.reservoir_r");
    }

    if (j.contains("coupling")) {
        const auto& cp = j["coupling"];
        if (!cp.is_object()) fail("coupling", "expected {lambda, nu}");
        if (cp.contains("lambda")) c.coupling.lambda = number(cp["lambda"], "coupling.lambda");
        if (cp.contains("nu")) c.coupling.nu = number(cp["nu"], "coupling.nu");
    }
    if (j.contains("grid")) c.grid = parse_grid(j["grid"], "grid");
    if (j.contains("ladder")) {
        const auto& l = j["ladder"];
        if (!l.is_object()) fail("ladder", "expected {eps_max, eps_min, ratio}");
        if (l.contains("eps_max")) c.ladder.eps_max = positive(l["eps_max"], "ladder.eps_max");
        if (l.contains("eps_min")) c.ladder.eps_min = positive(l["eps_min"], "ladder.eps_min");
        if (l.contains("ratio")) c.ladder.ratio = positive(l["ratio"], "ladder.ratio");
        try {
            c.ladder.check();
        } catch (const InvariantError& e) {
            fail("ladder", e.what());
        }
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        if (!o.is_object()) fail("oracle", "expected {nodes_per_piece}");
        if (o.contains("nodes_per_piece")) c.nodes_per_piece = count(o["nodes_per_piece"], "oracle.nodes_per_piece", 2);
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) fail("tolerances", "expected an object");
        for (const auto& [k, v] : t.items()) {
            const std::string p = "tolerances." + k;
            if (k == "div_tol") c.boundary.div_tol = positive(v, p);
            else if (k == "zero_tol") c.boundary.zero_tol = positive(v, p);
            else if (k == "im_tol") c.boundary.im_tol = positive(v, p);
            else if (k == "window") c.boundary.window = count(v, p, 3);
            else if (k == "d_floor") c.d_floor = positive(v, p);
            else if (k == "set_match_tol") c.set_match_tol = positive(v, p);
            else if (k == "quad_abs_tol") c.quad_abs_tol = positive(v, p);
            else fail(p, "unknown tolerance");
        }
    }
    if (j.contains("eta")) c.eta = positive(j["eta"], "eta");
    if (j.contains("eps")) {
        const auto& e = j["eps"];
        if (!e.is_array() || e.empty()) fail("eps", "expected a non-empty list");
        c.eps_values.clear();
        for (std::size_t i = 0; i < e.size(); ++i) c.eps_values.push_back(positive(e[i], "eps[" + std::to_string(i) + "]"));
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (!o.is_object()) fail("output", "expected {format, path}");
        if (o.contains("format")) {
            if (!o["format"].is_string()) fail("output.format", "expected \"csv\" or \"json\"");
            const auto f = o["format"].get<std::string>();
            if (f == "csv") c.format = OutputFormat::csv;
            else if (f == "json") c.format = OutputFormat::json;
            else fail("output.format", "expected \"csv\" or \"json\"");
        }
        if (o.contains("path")) {
            if (!o["path"].is_string()) fail("output.path", "expected a string");
            c.output_path = o["path"].get<std::string>();
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) fail("seed", "expected an integer");
        if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0) fail("seed", "must be non-negative");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(j);
}

json config_to_json(const RunConfig& c) {
    json model;
    if (!c.model.preset.empty()) {
        model["preset"] = c.model.preset;
        if (c.model.preset == "t2") model["t"] = c.model.t2_hopping;
    } else {
        json rows = json::array();
        for (Eigen::Index r = 0; r < c.model.h.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index k = 0; k < c.model.h.cols(); ++k) row.push_back(complex_to_json(c.model.h(r, k)));
            rows.push_back(row);
        }
        model["system"] = rows;
        model["delta_l"] = vector_to_json(c.model.delta_l);
        model["delta_r"] = vector_to_json(c.model.delta_r);
        model["reservoir_l"] = measure_to_json(c.model.res_l);
        model["reservoir_r"] = measure_to_json(c.model.res_r);
    }
    json j;
    j["model"] = model;
    j["coupling"] = {{"lambda", c.coupling.lambda}, {"nu", c.coupling.nu}};
    if (!c.grid.empty()) j["grid"] = c.grid;
    j["ladder"] = {{"eps_max", c.ladder.eps_max}, {"eps_min", c.ladder.eps_min}, {"ratio", c.ladder.ratio}};
    j["oracle"] = {{"nodes_per_piece", c.nodes_per_piece}};
    j["tolerances"] = {{"div_tol", c.boundary.div_tol},  {"zero_tol", c.boundary.zero_tol},
                       {"im_tol", c.boundary.im_tol},    {"window", c.boundary.window},
                       {"d_floor", c.d_floor},           {"set_match_tol", c.set_match_tol},
                       {"quad_abs_tol", c.quad_abs_tol}};
    j["eta"] = c.eta;
    j["eps"] = c.eps_values;
    json out = json::object();
    if (c.format) out["format"] = *c.format == OutputFormat::csv ? "csv" : "json";
    if (!c.output_path.empty()) out["path"] = c.output_path;
    j["output"] = out;
    j["seed"] = c.seed;
    return j;
}

}  // namespace ebb
