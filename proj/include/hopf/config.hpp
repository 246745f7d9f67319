#pragma once

// Run configuration, parsed from JSON:
//
// {
//   "params":  {"r": 1, "phi": 0.5}            or {"r": 1, "alpha": 0.3},
//   "preset":  "mixed-pair" | "great-circle-pair"   (optional; fills curve1/curve2),
//   "curve1":  <curve spec>, "curve2": <curve spec>,
//   "grid":    {"s_range": [a, b], "t_range": [a, b], "u_range": [a, b], "counts": [ns, nt, nu]},
//   "fd_step": 1e-5,
//   "tolerances": {"hopf", "alpha", "structure", "tau", "genericity_floor",
//                  "rank_rtol", "w_curve", "symmetry", "zeta_floor"},
//   "outputs": {"mesh_path", "csv_path", "report_path", "projection": [0, 1, 2] or 3x4 matrix},
//   "seed": 0, "probes": 100
// }
//
// Curve specs are described in curve_spec.hpp.

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "json.hpp"

#include "hopf/hermitian.hpp"
#include "hopf/legendrian.hpp"

namespace hopf {

struct GridSpec {
    Interval s_range{0.0, 1.0};
    Interval t_range{0.0, 1.0};
    Interval u_range{-1.0, 1.0};
    int s_count = 2;
    int t_count = 2;
    int u_count = 2;
};

struct Tolerances {
    double hopf = 1e-3;
    double alpha = 1e-3;
    // quadric and e0 normalization residuals
    double structure = 1e-9;
    double tau = 1e-10;
    double genericity_floor = 1e-6;
    double rank_rtol = 1e-7;
    double w_curve = 1e-6;
    double symmetry = 1e-3;
    double zeta_floor = 1e-8;
    // random probes with |genericity| above this must have full rank
    double probe_genericity = 0.1;
};

struct OutputSpec {
    std::string mesh_path;
    std::string csv_path;
    std::string report_path;
    // Maps (Re w1, Im w1, Re w2, Im w2) to R^3.
    Eigen::Matrix<double, 3, 4> projection = Eigen::Matrix<double, 3, 4>::Identity();
};

struct RunConfig {
    HopfParams params = HopfParams::from_phi(1.0, 0.0);
    nlohmann::json curve1;
    nlohmann::json curve2;
    GridSpec grid;
    double fd_step = 1e-5;
    Tolerances tolerances;
    OutputSpec outputs;
    std::uint64_t seed = 0;
    int probes = 100;
};

// Throws ConfigError (with a JSON pointer) on malformed input and RegimeError
// when |alpha| >= 2/r.
RunConfig parse_config(const nlohmann::json& document);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Curve specs of the named pairs.
nlohmann::json preset_pair(const std::string& name, int which);

} // namespace hopf
