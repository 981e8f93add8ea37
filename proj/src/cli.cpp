// cli.cpp - the `ebb` command-line tool.

#include "ebb/cli.hpp"

#include "ebb/averaging.hpp"
#include "ebb/certify.hpp"
#include "ebb/config.hpp"
#include "ebb/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace ebb::cli {

using nlohmann::json;

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::optional<double> lambda, nu, eps_min, eps_max;
    std::optional<std::string> grid, format, out;
    std::optional<std::size_t> nodes;
    std::optional<std::uint64_t> seed;
    bool strict = false;
};

struct Output {
    json doc;
    std::optional<CsvTable> table;
    bool unresolved = false;
    int status = kOk;
};

const std::map<std::string, std::vector<std::string>>& headers() {
    static const std::map<std::string, std::vector<std::string>> h{
        {"validate", {"field", "value"}},
        {"greens", {"energy", "eta", "phi", "psi", "re", "im", "oracle_re", "oracle_im", "rel_err"}},
        {"classify",
         {"energy", "in_M0", "in_Ml", "in_Mr", "in_sigma_hs", "in_S", "in_N", "near_pole", "chi_l_status", "chi_l_re",
          "chi_l_im", "chi_r_status", "chi_r_re", "chi_r_im", "c_set_chi_l", "c_set_delta_l"}},
        {"density", {"energy", "phi", "status", "density", "point_mass", "point_mass_converged"}},
        {"average", {"energy", "phi", "eps", "kappa", "closed", "quadrature", "rel_diff"}},
        {"certify",
         {"energy", "in_scope", "verdict", "abs_D", "aux1_lhs", "aux1_rhs", "aux2_lhs", "aux2_rhs",
          "sign_structure_ok", "note"}},
        {"scenario",
         {"lambda", "nu", "nodes_per_piece", "residual", "weight_estimate", "point_mass", "point_mass_converged",
          "expected_weight"}},
    };
    return h;
}

std::string fd(double x) { return format_double(x); }

void require_grid(const RunConfig& cfg) {
    if (cfg.grid.empty()) throw ConfigError("grid: missing (set it in the config or with --grid a:b:n)");
}

Output cmd_validate(const RunConfig& cfg) {
    Output o;
    o.table.emplace(headers().at("validate"));
    const auto& m = cfg.model;
    ValidationReport rep = m.preset.empty() ? validate(m.h, m.delta_l, m.delta_r, m.res_l, m.res_r) : validate(m.build());
    o.doc["validation"] = to_json(rep);
    for (const auto& [k, v] : o.doc["validation"].items()) {
        if (k == "messages") continue;
        o.table->add_row({k, v.is_boolean() ? format_bool(v.get<bool>())
                              : v.is_number_float() ? fd(v.get<double>())
                                                   : v.dump()});
    }
    if (rep.passed()) {
        const auto sets = exceptional_sets(m.build());
        o.doc["exceptional_sets"] = to_json(sets);
        auto list = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fd(v[i]);
            return s;
        };
        o.table->add_row({"sigma_hs", list(sets.sigma_hs)});
        o.table->add_row({"S", list(sets.S)});
        o.table->add_row({"N", sets.n_degenerate ? "degenerate" : list(sets.N)});
    } else {
        o.doc["exceptional_sets"] = nullptr;
        o.status = kConfigError;
    }
    for (const auto& msg : rep.messages) o.table->add_row({"message", msg});
    return o;
}

Output cmd_greens(const RunConfig& cfg) {
    require_grid(cfg);
    Output o;
    o.table.emplace(headers().at("greens"));
    const auto model = cfg.model.build();
    const auto disc = discretize(model, cfg.nodes_per_piece);
    json rows = json::array();
    for (double e : cfg.grid) {
        const Complex z(e, cfg.eta);
        const auto g = green_matrix(model, cfg.coupling, z);
        const auto r = green_oracle_matrix(disc, cfg.coupling, z);
        for (Vec u : kAllVecs)
            for (Vec v : kAllVecs) {
                const Complex a = (u == v) ? green(model, cfg.coupling, u, v, z) : g(index(u), index(v));
                const Complex b = r(index(u), index(v));
                const double scale = std::max(std::abs(b), 1e-300);
                const double rel = std::abs(a - b) / scale;
                o.table->add_row({fd(e), fd(cfg.eta), std::string(name(u)), std::string(name(v)), fd(a.real()),
                                  fd(a.imag()), fd(b.real()), fd(b.imag()), fd(rel)});
                rows.push_back({{"energy", e}, {"phi", name(u)}, {"psi", name(v)}, {"value", to_json(a)},
                                {"oracle", to_json(b)}, {"rel_err", rel}});
            }
    }
    o.doc["eta"] = cfg.eta;
    o.doc["rows"] = rows;
    return o;
}

Output cmd_classify(const RunConfig& cfg) {
    require_grid(cfg);
    Output o;
    o.table.emplace(headers().at("classify"));
    const auto model = cfg.model.build();
    const auto sets = exceptional_sets(model);
    ClassifyOptions opts{cfg.ladder, cfg.boundary, cfg.set_match_tol};
    json rows = json::array();
    for (double e : cfg.grid) {
        const auto c = classify_energy(model, sets, e, cfg.coupling.nu, opts);
        if (c.chi_l.status == BoundaryStatus::undetermined || c.chi_r.status == BoundaryStatus::undetermined)
            o.unresolved = true;
        auto part = [](const BoundaryRecord& r, bool im) {
            if (!r.value) return std::string();
            return fd(im ? r.value->imag() : r.value->real());
        };
        auto cset = [&](Vec phi) {
            for (const auto& d : c.c_sets)
                if (d.phi == phi) return d.applicable ? format_bool(d.met()) : std::string("n/a");
            return std::string("n/a");
        };
        o.table->add_row({fd(e), format_bool(c.in_M0), format_bool(c.in_Ml), format_bool(c.in_Mr),
                          format_bool(c.in_sigma_hs), format_bool(c.in_S),
                          c.in_N ? format_bool(*c.in_N) : std::string("degenerate"), format_bool(c.near_pole),
                          std::string(name(c.chi_l.status)), part(c.chi_l, false), part(c.chi_l, true),
                          std::string(name(c.chi_r.status)), part(c.chi_r, false), part(c.chi_r, true),
                          cset(Vec::chi_l), cset(Vec::delta_l)});
        rows.push_back(to_json(c));
    }
    o.doc["exceptional_sets"] = to_json(sets);
    o.doc["rows"] = rows;
    return o;
}

Output cmd_density(const RunConfig& cfg) {
    require_grid(cfg);
    Output o;
    o.table.emplace(headers().at("density"));
    const auto model = cfg.model.build();
    json rows = json::array();
    for (double e : cfg.grid)
        for (Vec phi : kAllVecs) {
            const auto d = ac_density(model, cfg.coupling, phi, e, cfg.ladder, cfg.boundary);
            const auto pm = point_mass(model, cfg.coupling, phi, e, cfg.ladder);
            if (d.status == BoundaryStatus::undetermined) o.unresolved = true;
            const std::optional<double> dens = d.ok() ? std::optional<double>(d.value) : std::nullopt;
            o.table->add_row({fd(e), std::string(name(phi)), std::string(name(d.status)), format_opt(dens),
                              fd(pm.weight), format_bool(pm.converged)});
            rows.push_back({{"energy", e},
                            {"phi", name(phi)},
                            {"status", name(d.status)},
                            {"density", dens ? json(*dens) : json(nullptr)},
                            {"point_mass", pm.weight},
                            {"point_mass_converged", pm.converged}});
        }
    o.doc["rows"] = rows;
    return o;
}

Output cmd_average(const RunConfig& cfg) {
    require_grid(cfg);
    Output o;
    o.table.emplace(headers().at("average"));
    const auto model = cfg.model.build();
    const auto sets = exceptional_sets(model);
    AveragingQuadOptions qo;
    qo.abs_tol = cfg.quad_abs_tol;
    json rows = json::array();
    for (double e : cfg.grid)
        for (Vec phi : kAllVecs)
            for (double eps : cfg.eps_values) {
                const bool left = phi == Vec::chi_l || phi == Vec::delta_l;
                const double kappa = left ? cfg.coupling.nu : cfg.coupling.lambda;
                const double closed = averaged_poisson_closed(model, kappa, phi, e, eps);
                std::optional<double> quad;
                try {
                    quad = averaged_poisson_quadrature(model, kappa, phi, e, eps, qo);
                } catch (const NumericalError&) {
                    o.unresolved = true;
                }
                std::optional<double> rel;
                if (quad) rel = std::abs(closed - *quad) / std::max(std::abs(closed), 1e-300);
                o.table->add_row({fd(e), std::string(name(phi)), fd(eps), fd(kappa), fd(closed), format_opt(quad),
                                  format_opt(rel)});
                rows.push_back({{"energy", e},
                                {"phi", name(phi)},
                                {"eps", eps},
                                {"kappa", kappa},
                                {"closed", closed},
                                {"quadrature", quad ? json(*quad) : json(nullptr)},
                                {"rel_diff", rel ? json(*rel) : json(nullptr)}});
            }
    const auto rep = verify_abs_continuity(model, sets, cfg.coupling.nu, cfg.grid, cfg.ladder, cfg.boundary);
    if (rep.undetermined > 0) o.unresolved = true;
    o.doc["rows"] = rows;
    o.doc["exceptional_sets"] = to_json(sets);
    o.doc["abs_continuity"] = to_json(rep);
    return o;
}

Output cmd_certify(const RunConfig& cfg) {
    require_grid(cfg);
    Output o;
    o.table.emplace(headers().at("certify"));
    const auto model = cfg.model.build();
    const auto sets = exceptional_sets(model);
    CertifyOptions opts;
    opts.classify = ClassifyOptions{cfg.ladder, cfg.boundary, cfg.set_match_tol};
    opts.d_floor = cfg.d_floor;
    const auto cert = certify_no_sc(model, sets, cfg.coupling, cfg.grid, opts);
    if (cert.unresolved > 0) o.unresolved = true;
    for (const auto& p : cert.points)
        o.table->add_row({fd(p.energy), format_bool(p.in_scope), std::string(name(p.verdict)), format_opt(p.abs_D),
                          fd(p.aux1_lhs), fd(p.aux1_rhs), fd(p.aux2_lhs), fd(p.aux2_rhs),
                          format_bool(p.sign_structure_ok), p.note});
    o.doc["certificate"] = to_json(cert);
    return o;
}

Output cmd_scenario(const RunConfig& cfg) {
    Output o;
    o.table.emplace(headers().at("scenario"));
    const auto model = remark2_model();
    const auto& c = cfg.coupling;
    const auto er = eigen_residual(model, c, cfg.nodes_per_piece);
    const auto pm = point_mass(model, c, Vec::delta_l, 0.0, cfg.ladder);
    const double expected = 1.0 / (1.0 + c.lambda * c.lambda + c.nu * c.nu);
    if (!pm.converged) o.unresolved = true;
    o.table->add_row({fd(c.lambda), fd(c.nu), std::to_string(cfg.nodes_per_piece), fd(er.residual),
                      fd(er.weight_estimate), fd(pm.weight), format_bool(pm.converged), fd(expected)});
    o.doc["scenario"] = "remark2";
    o.doc["lambda"] = c.lambda;
    o.doc["nu"] = c.nu;
    o.doc["nodes_per_piece"] = cfg.nodes_per_piece;
    o.doc["residual"] = er.residual;
    o.doc["weight_estimate"] = er.weight_estimate;
    o.doc["point_mass"] = pm.weight;
    o.doc["point_mass_converged"] = pm.converged;
    o.doc["expected_weight"] = expected;
    return o;
}

RunConfig assemble(const std::string& command, const Overrides& ov) {
    RunConfig cfg;
    if (ov.config) {
        cfg = load_config(*ov.config);
    } else if (command == "scenario") {
        cfg.model.preset = "remark2";
        cfg.coupling = {1.0, 1.0};
    } else {
        throw ConfigError("--config: required for '" + command + "'");
    }
    if (ov.lambda) cfg.coupling.lambda = *ov.lambda;
    if (ov.nu) cfg.coupling.nu = *ov.nu;
    if (!std::isfinite(cfg.coupling.lambda) || !std::isfinite(cfg.coupling.nu))
        throw ConfigError("coupling: lambda and nu must be finite");
    if (ov.grid) cfg.grid = parse_grid_literal(*ov.grid);
    if (ov.eps_min) cfg.ladder.eps_min = *ov.eps_min;
    if (ov.eps_max) cfg.ladder.eps_max = *ov.eps_max;
    try {
        cfg.ladder.check();
    } catch (const InvariantError& e) {
        throw ConfigError(std::string("ladder: ") + e.what());
    }
    if (ov.nodes) {
        if (*ov.nodes < 2) throw ConfigError("--nodes: must be >= 2");
        cfg.nodes_per_piece = *ov.nodes;
    }
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.format) cfg.format = *ov.format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (ov.out) cfg.output_path = *ov.out;
    return cfg;
}

Output dispatch(const std::string& command, const RunConfig& cfg) {
    if (command == "validate") return cmd_validate(cfg);
    if (command == "greens") return cmd_greens(cfg);
    if (command == "classify") return cmd_classify(cfg);
    if (command == "density") return cmd_density(cfg);
    if (command == "average") return cmd_average(cfg);
    if (command == "certify") return cmd_certify(cfg);
    return cmd_scenario(cfg);
}

// First bare token that is neither an option value nor a known command.
std::optional<std::string> unknown_command(const std::vector<std::string>& args) {
    static const std::vector<std::string> known{"validate", "greens",  "classify", "density",
                                                "average",  "certify", "scenario"};
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a.rfind("-", 0) == 0) {
            if (a != "--strict" && a.find('=') == std::string::npos) ++i;  // skip the value
            continue;
        }
        if (std::find(known.begin(), known.end(), a) == known.end()) return a;
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace

const std::vector<std::string>& csv_header(const std::string& command) { return headers().at(command); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Electronic black box spectral toolkit", "ebb"};
    app.fallthrough();
    app.require_subcommand(1);
    Overrides ov;
    app.add_option("--config", ov.config, "JSON run configuration");
    app.add_option("--lambda", ov.lambda, "left coupling");
    app.add_option("--nu", ov.nu, "right coupling");
    app.add_option("--grid", ov.grid, "energy grid a:b:n");
    app.add_option("--eps-min", ov.eps_min, "smallest ladder eps");
    app.add_option("--eps-max", ov.eps_max, "largest ladder eps");
    app.add_option("--nodes", ov.nodes, "oracle nodes per density piece");
    app.add_flag("--strict", ov.strict, "exit 2 on unresolved numerics");
    app.add_option("--seed", ov.seed, "seed recorded with the run");
    app.add_option("--format", ov.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", ov.out, "output file (default stdout)");

    std::string scenario_name;
    for (const char* c : {"validate", "greens", "classify", "density", "average", "certify"})
        app.add_subcommand(c, std::string("run ") + c);
    auto* scen = app.add_subcommand("scenario", "run a built-in scenario");
    scen->add_option("name", scenario_name, "scenario name")->required()->check(CLI::IsMember({"remark2"}));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (auto bad = unknown_command(args)) err << "error: unknown subcommand '" << *bad << "'\n";
        else err << "error: " << e.what() << "\n";
        err << app.help();
        return kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const RunConfig cfg = assemble(command, ov);
        Output o = dispatch(command, cfg);
        const bool default_json = command == "validate" || command == "scenario";
        const OutputFormat fmt = cfg.format.value_or(default_json ? OutputFormat::json : OutputFormat::csv);
        std::string text;
        if (fmt == OutputFormat::csv) {
            text = o.table->str();
        } else {
            json doc;
            doc["command"] = command;
            doc["config"] = config_to_json(cfg);
            for (const auto& [k, v] : o.doc.items()) doc[k] = v;
            doc["unresolved"] = o.unresolved;
            text = doc.dump(2) + "\n";
        }
        if (cfg.output_path.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.output_path, std::ios::binary);
            if (!f || !(f << text)) throw ConfigError("output.path: cannot write '" + cfg.output_path + "'");
        }
        if (o.status != kOk) return o.status;
        if (ov.strict && o.unresolved) {
            err << "unresolved points present (--strict)\n";
            return kUnresolved;
        }
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

}  // namespace ebb::cli
