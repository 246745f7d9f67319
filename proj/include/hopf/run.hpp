#pragma once

// Batch runs over a regular (s, t, u) grid: sampling, verification, CSV,
// mesh and JSON report export.

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "hopf/config.hpp"
#include "hopf/dalembert.hpp"
#include "hopf/verify.hpp"

namespace hopf {

enum class RunMode { Construct, Verify };

// Ball-model points of an s x t x u grid. Vertex (i, j, k) lives at
// (k * s_count + i) * t_count + j; masked vertices hold NaN.
struct MeshGrid {
    int s_count = 0;
    int t_count = 0;
    int u_count = 0;
    std::vector<ChartPoint> points;

    std::size_t vertex(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(k) * s_count + i) * t_count + j;
    }
    bool usable(std::size_t v) const { return points.at(v).allFinite(); }
    std::size_t face_count() const;
};

// OBJ (one group per u-slice) or PLY, chosen by extension. n = 2 only.
void export_mesh(const MeshGrid& mesh, const Eigen::Matrix<double, 3, 4>& projection,
                 const std::filesystem::path& path);
std::string mesh_obj_text(const MeshGrid& mesh, const Eigen::Matrix<double, 3, 4>& projection);
std::string mesh_ply_text(const MeshGrid& mesh, const Eigen::Matrix<double, 3, 4>& projection);

// "%.17g", with "nan" / "inf" / "-inf" spelled uniformly.
std::string format_real(double v);

struct RunCheck {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

struct RunResult {
    RunMode mode = RunMode::Verify;
    VerificationReport report;
    MeshGrid mesh;
    std::vector<RunCheck> checks;
    nlohmann::json document;
    std::string csv;
    bool passed = true;
};

// Builds the curves and the patch described by a config.
std::shared_ptr<DalembertPatch> build_patch(const RunConfig& config);

// Samples the grid; in Verify mode also evaluates the shape operator and
// random rank probes. Writes the configured outputs.
RunResult run(const RunConfig& config, RunMode mode);

// Same as run() but without touching the file system.
RunResult evaluate(const RunConfig& config, RunMode mode);

std::string csv_text(const VerificationReport& report, int n);

// Contact checks of every curve named in a config document ("curve",
// "curve1", "curve2" or a pair "preset"). Sets `passed`.
nlohmann::json check_curves(const nlohmann::json& document, double fd_step, bool& passed);

} // namespace hopf
