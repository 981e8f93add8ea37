// config.hpp - the run configuration consumed by the command-line tool.
//
// Complex numbers are encoded as [re, im] pairs. Measures are
//   {"atoms": [[position, weight], ...],
//    "pieces": [{"interval": [a, b], "poly": [c0, c1, ...]}, ...]}.

#pragma once

#include "ebb/blackbox.hpp"
#include "ebb/boundary.hpp"
#include "ebb/resolvent.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ebb {

// Field-level configuration problem; what() starts with the JSON path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelData {
    std::string preset;  // "remark2", "t2" or empty for an explicit model
    double t2_hopping = 0.5;
    Eigen::MatrixXcd h;
    Eigen::VectorXcd delta_l;
    Eigen::VectorXcd delta_r;
    SpectralMeasure res_l;
    SpectralMeasure res_r;

    // Throws ConfigError (prefixed "model: ") when an invariant fails.
    BlackBoxModel build() const;
};

enum class OutputFormat { csv, json };

struct RunConfig {
    ModelData model;
    CouplingParams coupling{};
    std::vector<double> grid;
    EpsilonLadder ladder{};
    std::size_t nodes_per_piece = 200;
    BoundaryTolerances boundary{};
    double d_floor = 1e-8;
    double set_match_tol = 1e-9;
    double quad_abs_tol = 1e-9;
    double eta = 0.05;                             // Im z for the greens table
    std::vector<double> eps_values{1e-1, 1e-2, 1e-3};  // eps for the average table
    std::optional<OutputFormat> format;
    std::string output_path;                       // empty: stdout
    std::uint64_t seed = 0;
};

// Grid literal "a:b:n" (n >= 1 points, endpoints included).
std::vector<double> parse_grid_literal(const std::string& s);
std::vector<double> linspace(double a, double b, std::size_t n);

SpectralMeasure parse_measure(const nlohmann::json& j, const std::string& path);
nlohmann::json measure_to_json(const SpectralMeasure& mu);

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
// Normalized form; parse_config(config_to_json(c)) reproduces c.
nlohmann::json config_to_json(const RunConfig& c);

}  // namespace ebb
