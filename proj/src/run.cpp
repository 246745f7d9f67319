#include "hopf/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "hopf/curve_spec.hpp"
#include "hopf/errors.hpp"

namespace hopf {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// |genericity| at or below this on every retained sample flags a degenerate family.
constexpr double kIdenticallyZero = 1e-10;
constexpr int kCurveCheckSamples = 257;
constexpr double kContactTol = 1e-9;
constexpr double kCurveFdTol = 1e-6;

std::string coords(double s, double t, double u)
{
    return "(s, t, u) = (" + format_real(s) + ", " + format_real(t) + ", " + format_real(u) + ")";
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out)
        throw Error("failed writing " + path.string());
}

Eigen::Vector3d project(const ChartPoint& w, const Eigen::Matrix<double, 3, 4>& projection)
{
    const Eigen::Vector4d real(w[0].real(), w[0].imag(), w[1].real(), w[1].imag());
    return projection * real;
}

void check_mesh(const MeshGrid& mesh)
{
    const std::size_t expected = static_cast<std::size_t>(mesh.s_count) * mesh.t_count * mesh.u_count;
    if (mesh.points.size() != expected)
        throw InputError("export_mesh: point count does not match the grid");
    for (const auto& w : mesh.points)
        if (w.size() != 2)
            throw InputError("export_mesh: mesh export needs n = 2");
}

bool face_usable(const MeshGrid& mesh, int i, int j, int k)
{
    return mesh.usable(mesh.vertex(i, j, k)) && mesh.usable(mesh.vertex(i + 1, j, k)) &&
           mesh.usable(mesh.vertex(i + 1, j + 1, k)) && mesh.usable(mesh.vertex(i, j + 1, k));
}

json stat_json(const SummaryStat& s)
{
    if (s.count == 0)
        return {{"count", 0}, {"max", nullptr}, {"mean", nullptr}};
    return {{"count", s.count}, {"max", s.max}, {"mean", s.mean}};
}

json index_json(int i, int j, int k)
{
    return json::array({i, j, k});
}

struct ProbeOutcome {
    int requested = 0;
    int found = 0;
    int attempts = 0;
    int skipped = 0;
    json failures = json::array();
};

ProbeOutcome run_probes(const DalembertPatch& patch, const RunConfig& cfg)
{
    ProbeOutcome out;
    out.requested = cfg.probes;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> s_dist(cfg.grid.s_range.lo, cfg.grid.s_range.hi);
    std::uniform_real_distribution<double> t_dist(cfg.grid.t_range.lo, cfg.grid.t_range.hi);
    std::uniform_real_distribution<double> u_dist(cfg.grid.u_range.lo, cfg.grid.u_range.hi);
    const int budget = 50 * cfg.probes;
    while (out.found < cfg.probes && out.attempts < budget) {
        ++out.attempts;
        const double s = s_dist(rng);
        const double t = t_dist(rng);
        const double u = u_dist(rng);
        const std::array<double, 2> x{s, t};
        try {
            if (std::abs(patch.genericity(x)) <= cfg.tolerances.probe_genericity)
                continue;
            const int rank = patch.jacobian_rank(x, u, cfg.tolerances.rank_rtol);
            ++out.found;
            if (rank != 3)
                out.failures.push_back({{"s", s}, {"t", t}, {"u", u}, {"rank", rank}});
        } catch (const BranchObstructionError&) {
            ++out.skipped;
        } catch (const UnreachableNodeError&) {
            ++out.skipped;
        }
    }
    return out;
}

} // namespace

std::size_t MeshGrid::face_count() const
{
    std::size_t count = 0;
    for (int k = 0; k < u_count; ++k)
        for (int i = 0; i + 1 < s_count; ++i)
            for (int j = 0; j + 1 < t_count; ++j)
                count += face_usable(*this, i, j, k) ? 1 : 0;
    return count;
}

std::string format_real(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string mesh_obj_text(const MeshGrid& mesh, const Eigen::Matrix<double, 3, 4>& projection)
{
    check_mesh(mesh);
    std::string out = "# hopfdal surface mesh\n";
    for (int k = 0; k < mesh.u_count; ++k) {
        out += "g u_" + std::to_string(k) + "\n";
        for (int i = 0; i < mesh.s_count; ++i)
            for (int j = 0; j < mesh.t_count; ++j) {
                const Eigen::Vector3d p = project(mesh.points[mesh.vertex(i, j, k)], projection);
                out += "v " + format_real(p.x()) + " " + format_real(p.y()) + " " + format_real(p.z()) + "\n";
            }
        for (int i = 0; i + 1 < mesh.s_count; ++i)
            for (int j = 0; j + 1 < mesh.t_count; ++j) {
                if (!face_usable(mesh, i, j, k))
                    continue;
                out += "f " + std::to_string(mesh.vertex(i, j, k) + 1) + " " +
                       std::to_string(mesh.vertex(i + 1, j, k) + 1) + " " +
                       std::to_string(mesh.vertex(i + 1, j + 1, k) + 1) + " " +
                       std::to_string(mesh.vertex(i, j + 1, k) + 1) + "\n";
            }
    }
    return out;
}

std::string mesh_ply_text(const MeshGrid& mesh, const Eigen::Matrix<double, 3, 4>& projection)
{
    check_mesh(mesh);
    std::string out = "ply\nformat ascii 1.0\n";
    out += "element vertex " + std::to_string(mesh.points.size()) + "\n";
    out += "property double x\nproperty double y\nproperty double z\n";
    out += "element face " + std::to_string(mesh.face_count()) + "\n";
    out += "property list uchar int vertex_indices\nend_header\n";
    for (const auto& w : mesh.points) {
        const Eigen::Vector3d p = project(w, projection);
        out += format_real(p.x()) + " " + format_real(p.y()) + " " + format_real(p.z()) + "\n";
    }
    for (int k = 0; k < mesh.u_count; ++k)
        for (int i = 0; i + 1 < mesh.s_count; ++i)
            for (int j = 0; j + 1 < mesh.t_count; ++j) {
                if (!face_usable(mesh, i, j, k))
                    continue;
                out += "4 " + std::to_string(mesh.vertex(i, j, k)) + " " + std::to_string(mesh.vertex(i + 1, j, k)) +
                       " " + std::to_string(mesh.vertex(i + 1, j + 1, k)) + " " +
                       std::to_string(mesh.vertex(i, j + 1, k)) + "\n";
            }
    return out;
}

void export_mesh(const MeshGrid& mesh, const Eigen::Matrix<double, 3, 4>& projection,
                 const std::filesystem::path& path)
{
    const auto ext = path.extension().string();
    if (ext == ".obj")
        write_file(path, mesh_obj_text(mesh, projection));
    else if (ext == ".ply")
        write_file(path, mesh_ply_text(mesh, projection));
    else
        throw InputError("export_mesh: unsupported extension '" + ext + "' (use .obj or .ply)");
}

std::string csv_text(const VerificationReport& report, int n)
{
    std::string out = "s,t,u";
    for (int k = 1; k <= n; ++k)
        out += ",re_w" + std::to_string(k) + ",im_w" + std::to_string(k);
    out += ",abs_zeta,arg_zeta,genericity,hopf_defect,measured_alpha,rank\n";
    for (const auto& rec : report.records) {
        for (double p : rec.params)
            out += format_real(p) + ",";
        out += format_real(rec.u);
        for (int k = 0; k < n; ++k) {
            const Complex w = k < rec.w.size() ? rec.w[k] : Complex(kNaN, kNaN);
            out += "," + format_real(w.real()) + "," + format_real(w.imag());
        }
        out += "," + format_real(std::abs(rec.zeta)) + "," + format_real(std::arg(rec.zeta));
        out += "," + format_real(rec.genericity) + "," + format_real(rec.hopf_defect) + "," +
               format_real(rec.measured_alpha) + "," + std::to_string(rec.rank) + "\n";
    }
    return out;
}

std::shared_ptr<DalembertPatch> build_patch(const RunConfig& cfg)
{
    auto first = std::make_shared<CurvePatch>(curve_from_json(cfg.curve1, "/curve1"));
    auto second = std::make_shared<CurvePatch>(curve_from_json(cfg.curve2, "/curve2"));
    const Interval d1 = first->curve().domain();
    const Interval d2 = second->curve().domain();
    if (!d1.contains(cfg.grid.s_range.lo) || !d1.contains(cfg.grid.s_range.hi))
        throw ConfigError("/grid/s_range", "outside the domain of curve1");
    if (!d2.contains(cfg.grid.t_range.lo) || !d2.contains(cfg.grid.t_range.hi))
        throw ConfigError("/grid/t_range", "outside the domain of curve2");

    ParameterLattice lattice({{cfg.grid.s_range.lo, cfg.grid.s_range.hi, cfg.grid.s_count},
                              {cfg.grid.t_range.lo, cfg.grid.t_range.hi, cfg.grid.t_count}});
    TauFieldOptions opts;
    opts.zeta_floor = cfg.tolerances.zeta_floor;
    try {
        return std::make_shared<DalembertPatch>(first, second, cfg.params, lattice, opts);
    } catch (const BranchObstructionError& e) {
        const auto p = lattice.point(e.node());
        throw BranchObstructionError(std::string(e.what()) + " at (s, t) = (" + format_real(p[0]) + ", " +
                                         format_real(p[1]) + ")",
                                     e.node());
    }
}

RunResult evaluate(const RunConfig& cfg, RunMode mode)
{
    RunResult result;
    result.mode = mode;
    const auto patch = build_patch(cfg);
    const TauField& field = patch->tau_field();
    const ParameterLattice& lattice = field.lattice();
    const GridSpec& grid = cfg.grid;
    const LatticeAxis u_axis{grid.u_range.lo, grid.u_range.hi, grid.u_count};

    VerifyOptions vopt;
    vopt.shape.fd_step = cfg.fd_step;
    vopt.shape.frame.rank_rtol = cfg.tolerances.rank_rtol;
    vopt.genericity_floor = cfg.tolerances.genericity_floor;

    MeshGrid& mesh = result.mesh;
    mesh.s_count = grid.s_count;
    mesh.t_count = grid.t_count;
    mesh.u_count = grid.u_count;
    mesh.points.assign(static_cast<std::size_t>(grid.s_count) * grid.t_count * grid.u_count,
                       ChartPoint::Constant(2, Complex(kNaN, kNaN)));

    json masked = json::array(), rank_deficient = json::array(), non_generic = json::array();
    json errors = json::array();
    const int full_rank = 2 * patch->n() - 1;

    for (int i = 0; i < grid.s_count; ++i) {
        for (int j = 0; j < grid.t_count; ++j) {
            const std::array<int, 2> idx{i, j};
            const std::size_t node = lattice.flatten(idx);
            const std::vector<double> x = lattice.point(node);
            for (int k = 0; k < grid.u_count; ++k) {
                const double u = u_axis.at(k);
                SampleRecord rec;
                if (!field.retained(node)) {
                    rec.params = x;
                    rec.u = u;
                    rec.zeta = field.zeta(node);
                    rec.w = ChartPoint::Constant(patch->n(), Complex(kNaN, kNaN));
                    rec.genericity = rec.quadric_residual = rec.ehat0_residual = rec.tau_residual = kNaN;
                    rec.hopf_defect = rec.measured_alpha = rec.constructed_defect = rec.asymmetry =
                        rec.w_alignment = kNaN;
                    rec.note = "masked";
                    masked.push_back(index_json(i, j, k));
                    result.report.records.push_back(std::move(rec));
                    continue;
                }
                try {
                    if (mode == RunMode::Verify) {
                        rec = verify_sample(*patch, x, u, vopt);
                    } else {
                        const SurfaceSample sample = patch->surface_point(x, u, cfg.tolerances.rank_rtol);
                        rec.params = x;
                        rec.u = u;
                        rec.zeta = sample.zeta;
                        rec.w = sample.w;
                        rec.rank = sample.rank;
                        rec.genericity = sample.genericity;
                        rec.quadric_residual = sample.quadric_residual;
                        rec.ehat0_residual = sample.ehat0_residual;
                        rec.tau_residual = sample.tau_residual;
                        rec.hopf_defect = rec.measured_alpha = rec.constructed_defect = rec.asymmetry =
                            rec.w_alignment = kNaN;
                        rec.generic = sample.rank == full_rank &&
                                      std::abs(sample.genericity) >= cfg.tolerances.genericity_floor;
                        if (sample.rank < full_rank)
                            rec.note = "rank-deficient";
                        else if (!rec.generic)
                            rec.note = "non-generic";
                    }
                } catch (const Error& e) {
                    throw Error(std::string(e.what()) + " at " + coords(x[0], x[1], u));
                }
                if (rec.rank < full_rank)
                    rank_deficient.push_back(index_json(i, j, k));
                else if (!rec.generic)
                    non_generic.push_back(index_json(i, j, k));
                if (!rec.note.empty() && rec.note != "rank-deficient" && rec.note != "non-generic")
                    errors.push_back(
                        {{"index", index_json(i, j, k)}, {"s", x[0]}, {"t", x[1]}, {"u", u}, {"note", rec.note}});
                if (rec.w.size() == 2)
                    mesh.points[mesh.vertex(i, j, k)] = rec.w;
                result.report.records.push_back(std::move(rec));
            }
        }
    }

    const VerificationReport& report = result.report;
    const double alpha = cfg.params.alpha();
    const Tolerances& tol = cfg.tolerances;

    std::size_t retained = 0, unevaluated_generic = 0;
    double max_genericity = 0.0, alpha_error = 0.0;
    int rank_min = std::numeric_limits<int>::max(), rank_max = 0;
    for (const auto& rec : report.records) {
        if (rec.note == "masked")
            continue;
        ++retained;
        rank_min = std::min(rank_min, rec.rank);
        rank_max = std::max(rank_max, rec.rank);
        if (std::isfinite(rec.genericity))
            max_genericity = std::max(max_genericity, std::abs(rec.genericity));
        if (mode == RunMode::Verify && rec.generic) {
            if (!std::isfinite(rec.hopf_defect))
                ++unevaluated_generic;
            else
                alpha_error = std::max(alpha_error, std::abs(rec.measured_alpha - alpha));
        }
    }

    auto add_check = [&](std::string name, double value, double tolerance) {
        const bool ok = value <= tolerance;
        result.checks.push_back({std::move(name), value, tolerance, ok});
        result.passed = result.passed && ok;
    };
    add_check("quadric_residual", report.summarize(&SampleRecord::quadric_residual).max, tol.structure);
    add_check("ehat0_residual", report.summarize(&SampleRecord::ehat0_residual).max, tol.structure);
    add_check("tau_residual", report.summarize(&SampleRecord::tau_residual).max, tol.tau);

    json probes = nullptr;
    if (mode == RunMode::Verify) {
        add_check("hopf_defect", report.summarize(&SampleRecord::hopf_defect, true).max, tol.hopf);
        add_check("alpha_error", alpha_error, tol.alpha);
        add_check("asymmetry", report.summarize(&SampleRecord::asymmetry, true).max, tol.symmetry);
        add_check("w_alignment", report.summarize(&SampleRecord::w_alignment).max, tol.w_curve);
        add_check("unevaluated_generic_samples", static_cast<double>(unevaluated_generic), 0.0);
        const ProbeOutcome po = run_probes(*patch, cfg);
        add_check("probe_rank_failures", static_cast<double>(po.failures.size()), 0.0);
        probes = {{"seed", cfg.seed},
                  {"requested", po.requested},
                  {"found", po.found},
                  {"attempts", po.attempts},
                  {"skipped", po.skipped},
                  {"genericity_threshold", tol.probe_genericity},
                  {"failures", po.failures}};
    }

    json checks = json::array();
    for (const auto& c : result.checks)
        checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});

    const std::size_t generic = report.generic_count();
    json& doc = result.document;
    doc["mode"] = mode == RunMode::Verify ? "verify" : "construct";
    doc["params"] = {{"r", cfg.params.r()}, {"phi", cfg.params.phi()}, {"alpha", alpha}};
    doc["grid"] = {{"s_range", {grid.s_range.lo, grid.s_range.hi}},
                   {"t_range", {grid.t_range.lo, grid.t_range.hi}},
                   {"u_range", {grid.u_range.lo, grid.u_range.hi}},
                   {"counts", {grid.s_count, grid.t_count, grid.u_count}}};
    doc["fd_step"] = cfg.fd_step;
    doc["orientation"] = to_string(vopt.shape.orientation);
    doc["constructed_alpha"] = alpha;
    doc["tau_components"] = field.component_count();
    doc["counts"] = {{"samples", report.records.size()},
                     {"retained", retained},
                     {"masked", masked.size()},
                     {"rank_deficient", rank_deficient.size()},
                     {"non_generic", non_generic.size()},
                     {"generic", generic},
                     {"unevaluated_generic", unevaluated_generic}};
    doc["flags"] = {{"genericity_identically_zero", retained > 0 && max_genericity <= kIdenticallyZero},
                    {"no_generic_samples", generic == 0}};
    doc["summary"] = {
        {"quadric_residual", stat_json(report.summarize(&SampleRecord::quadric_residual))},
        {"ehat0_residual", stat_json(report.summarize(&SampleRecord::ehat0_residual))},
        {"tau_residual", stat_json(report.summarize(&SampleRecord::tau_residual))},
        {"genericity", stat_json(report.summarize(&SampleRecord::genericity))},
        {"hopf_defect", stat_json(report.summarize(&SampleRecord::hopf_defect, true))},
        {"constructed_defect", stat_json(report.summarize(&SampleRecord::constructed_defect, true))},
        {"measured_alpha", stat_json(report.summarize(&SampleRecord::measured_alpha, true))},
        {"alpha_error", mode == RunMode::Verify && generic > 0 ? json(alpha_error) : json(nullptr)},
        {"asymmetry", stat_json(report.summarize(&SampleRecord::asymmetry, true))},
        {"w_alignment", stat_json(report.summarize(&SampleRecord::w_alignment))},
        {"rank", retained > 0 ? json{{"min", rank_min}, {"max", rank_max}} : json(nullptr)}};
    doc["exclusions"] = {{"masked", masked},
                         {"rank_deficient", rank_deficient},
                         {"non_generic", non_generic},
                         {"errors", errors}};
    doc["probes"] = probes;
    doc["checks"] = checks;
    doc["passed"] = result.passed;

    result.csv = csv_text(report, patch->n());
    return result;
}

RunResult run(const RunConfig& cfg, RunMode mode)
{
    RunResult result = evaluate(cfg, mode);
    if (!cfg.outputs.csv_path.empty())
        write_file(cfg.outputs.csv_path, result.csv);
    if (!cfg.outputs.mesh_path.empty())
        export_mesh(result.mesh, cfg.outputs.projection, cfg.outputs.mesh_path);
    if (!cfg.outputs.report_path.empty())
        write_file(cfg.outputs.report_path, result.document.dump(2) + "\n");
    return result;
}

json check_curves(const json& doc, double fd_step, bool& passed)
{
    if (!doc.is_object())
        throw ConfigError("", "config document must be a JSON object");
    if (!(fd_step > 0.0))
        throw InputError("check_curves: fd_step must be positive");
    std::vector<std::pair<std::string, json>> specs;
    if (doc.contains("preset")) {
        if (!doc.at("preset").is_string())
            throw ConfigError("/preset", "expected a string");
        const auto name = doc.at("preset").get<std::string>();
        specs.emplace_back("curve1", preset_pair(name, 1));
        specs.emplace_back("curve2", preset_pair(name, 2));
    }
    for (const char* key : {"curve", "curve1", "curve2"}) {
        if (!doc.contains(key))
            continue;
        auto it = std::find_if(specs.begin(), specs.end(), [&](const auto& p) { return p.first == key; });
        if (it != specs.end())
            it->second = doc.at(key);
        else
            specs.emplace_back(key, doc.at(key));
    }
    if (specs.empty())
        throw ConfigError("", "no curve found (give \"curve\", \"curve1\", \"curve2\" or a pair \"preset\")");

    passed = true;
    json curves = json::array();
    for (const auto& [name, spec] : specs) {
        const ContactCurve curve = curve_from_json(spec, "/" + name);
        const Interval d = curve.domain();
        double max_identity = 0.0, max_defect = 0.0, max_fd = 0.0, max_null = 0.0;
        for (int k = 0; k < kCurveCheckSamples; ++k) {
            const double t = d.lo + fd_step + (d.length() - 2.0 * fd_step) * k / (kCurveCheckSamples - 1);
            const AmbientVector n = lift(curve, t);
            const double defect = contact_defect(curve, t);
            const AmbientVector dn = (lift(curve, t + fd_step) - lift(curve, t - fd_step)) / (2.0 * fd_step);
            const double fd_defect = real_form(dn, times_i(n));
            max_identity = std::max(max_identity, std::abs(curve.contact_identity(t)));
            max_defect = std::max(max_defect, std::abs(defect));
            max_fd = std::max(max_fd, std::abs(fd_defect - defect));
            max_null = std::max(max_null, std::abs(herm_form(n, n).real()));
        }
        const bool ok = max_identity <= kContactTol && max_defect <= kContactTol && max_fd <= kCurveFdTol &&
                        max_null <= kContactTol;
        passed = passed && ok;
        curves.push_back({{"name", name},
                          {"domain", {d.lo, d.hi}},
                          {"samples", kCurveCheckSamples},
                          {"max_contact_identity", max_identity},
                          {"max_contact_defect", max_defect},
                          {"max_fd_mismatch", max_fd},
                          {"max_null_residual", max_null},
                          {"passed", ok}});
    }
    return {{"curves", curves}, {"fd_step", fd_step}, {"passed", passed}};
}

} // namespace hopf
