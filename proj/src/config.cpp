#include "hopf/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hopf/errors.hpp"

namespace hopf {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path)
{
    if (!obj.contains(key))
        throw ConfigError(path + "/" + key, "missing required field");
    return obj.at(key);
}

double as_number(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(path, "expected a finite number");
    return d;
}

double positive(const json& v, const std::string& path)
{
    const double d = as_number(v, path);
    if (!(d > 0.0))
        throw ConfigError(path, "must be positive");
    return d;
}

Interval as_range(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2)
        throw ConfigError(path, "expected [lo, hi]");
    Interval out{as_number(v[0], path + "/0"), as_number(v[1], path + "/1")};
    if (!(out.hi > out.lo))
        throw ConfigError(path, "empty range");
    return out;
}

HopfParams parse_params(const json& p, const std::string& path)
{
    if (!p.is_object())
        throw ConfigError(path, "expected an object");
    const double r = positive(require(p, "r", path), path + "/r");
    const bool has_phi = p.contains("phi");
    const bool has_alpha = p.contains("alpha");
    if (has_phi == has_alpha)
        throw ConfigError(path, "give exactly one of \"phi\" or \"alpha\"");
    if (has_alpha)
        return HopfParams::from_alpha(r, as_number(p.at("alpha"), path + "/alpha"));
    return HopfParams::from_phi(r, as_number(p.at("phi"), path + "/phi"));
}

GridSpec parse_grid(const json& g, const std::string& path)
{
    if (!g.is_object())
        throw ConfigError(path, "expected an object");
    GridSpec out;
    out.s_range = as_range(require(g, "s_range", path), path + "/s_range");
    out.t_range = as_range(require(g, "t_range", path), path + "/t_range");
    out.u_range = as_range(require(g, "u_range", path), path + "/u_range");
    const json& counts = require(g, "counts", path);
    if (!counts.is_array() || counts.size() != 3)
        throw ConfigError(path + "/counts", "expected [ns, nt, nu]");
    int* dst[3] = {&out.s_count, &out.t_count, &out.u_count};
    for (std::size_t k = 0; k < 3; ++k) {
        const std::string cpath = path + "/counts/" + std::to_string(k);
        if (!counts[k].is_number_integer())
            throw ConfigError(cpath, "expected an integer");
        const auto c = counts[k].get<long long>();
        if (c < 2)
            throw ConfigError(cpath, "at least 2 samples per axis");
        if (c > 100000)
            throw ConfigError(cpath, "too many samples");
        *dst[k] = static_cast<int>(c);
    }
    return out;
}

Tolerances parse_tolerances(const json& t, const std::string& path)
{
    if (!t.is_object())
        throw ConfigError(path, "expected an object");
    Tolerances out;
    const std::pair<const char*, double*> fields[] = {
        {"hopf", &out.hopf},
        {"alpha", &out.alpha},
        {"structure", &out.structure},
        {"tau", &out.tau},
        {"genericity_floor", &out.genericity_floor},
        {"rank_rtol", &out.rank_rtol},
        {"w_curve", &out.w_curve},
        {"symmetry", &out.symmetry},
        {"zeta_floor", &out.zeta_floor},
        {"probe_genericity", &out.probe_genericity},
    };
    for (const auto& [key, dst] : fields)
        if (t.contains(key))
            *dst = positive(t.at(key), path + "/" + key);
    for (const auto& item : t.items()) {
        bool known = false;
        for (const auto& [key, dst] : fields)
            known = known || item.key() == key;
        if (!known)
            throw ConfigError(path + "/" + item.key(), "unknown tolerance");
    }
    return out;
}

Eigen::Matrix<double, 3, 4> parse_projection(const json& p, const std::string& path)
{
    Eigen::Matrix<double, 3, 4> out = Eigen::Matrix<double, 3, 4>::Zero();
    if (!p.is_array() || p.size() != 3)
        throw ConfigError(path, "expected an axis triple or a 3x4 matrix");
    if (p[0].is_array()) {
        for (std::size_t i = 0; i < 3; ++i) {
            const std::string rpath = path + "/" + std::to_string(i);
            if (!p[i].is_array() || p[i].size() != 4)
                throw ConfigError(rpath, "expected a row of 4 numbers");
            for (std::size_t j = 0; j < 4; ++j)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    as_number(p[i][j], rpath + "/" + std::to_string(j));
        }
        return out;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string epath = path + "/" + std::to_string(i);
        if (!p[i].is_number_integer())
            throw ConfigError(epath, "expected an axis index in 0..3");
        const auto axis = p[i].get<long long>();
        if (axis < 0 || axis > 3)
            throw ConfigError(epath, "expected an axis index in 0..3");
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(axis)) = 1.0;
    }
    return out;
}

OutputSpec parse_outputs(const json& o, const std::string& path)
{
    if (!o.is_object())
        throw ConfigError(path, "expected an object");
    OutputSpec out;
    const std::pair<const char*, std::string*> fields[] = {
        {"mesh_path", &out.mesh_path}, {"csv_path", &out.csv_path}, {"report_path", &out.report_path}};
    for (const auto& [key, dst] : fields) {
        if (!o.contains(key))
            continue;
        if (!o.at(key).is_string())
            throw ConfigError(path + "/" + key, "expected a string");
        *dst = o.at(key).get<std::string>();
    }
    if (!out.mesh_path.empty()) {
        const auto ext = std::filesystem::path(out.mesh_path).extension().string();
        if (ext != ".obj" && ext != ".ply")
            throw ConfigError(path + "/mesh_path", "mesh extension must be .obj or .ply");
    }
    if (o.contains("projection"))
        out.projection = parse_projection(o.at("projection"), path + "/projection");
    return out;
}

} // namespace

json preset_pair(const std::string& name, int which)
{
    const json great = {{"preset", "great-circle"}, {"params", json::object()}};
    if (name == "great-circle-pair")
        return great;
    if (name == "mixed-pair") {
        if (which == 1)
            return great;
        return {{"preset", "tilted-circle"}, {"params", {{"m", std::numbers::pi / 3}}}};
    }
    throw ConfigError("/preset", "unknown pair preset '" + name + "'");
}

RunConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("", "config document must be a JSON object");
    RunConfig cfg;
    cfg.params = parse_params(require(doc, "params", ""), "/params");

    if (doc.contains("preset")) {
        if (!doc.at("preset").is_string())
            throw ConfigError("/preset", "expected a string");
        const auto name = doc.at("preset").get<std::string>();
        cfg.curve1 = preset_pair(name, 1);
        cfg.curve2 = preset_pair(name, 2);
    }
    if (doc.contains("curve1"))
        cfg.curve1 = doc.at("curve1");
    if (doc.contains("curve2"))
        cfg.curve2 = doc.at("curve2");
    if (cfg.curve1.is_null())
        throw ConfigError("/curve1", "missing curve (give curve1 or a pair preset)");
    if (cfg.curve2.is_null())
        throw ConfigError("/curve2", "missing curve (give curve2 or a pair preset)");

    cfg.grid = parse_grid(require(doc, "grid", ""), "/grid");
    if (doc.contains("fd_step"))
        cfg.fd_step = positive(doc.at("fd_step"), "/fd_step");
    if (doc.contains("tolerances"))
        cfg.tolerances = parse_tolerances(doc.at("tolerances"), "/tolerances");
    if (doc.contains("outputs"))
        cfg.outputs = parse_outputs(doc.at("outputs"), "/outputs");
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer() || doc.at("seed").get<long long>() < 0)
            throw ConfigError("/seed", "expected a non-negative integer");
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("probes")) {
        if (!doc.at("probes").is_number_integer() || doc.at("probes").get<long long>() < 0)
            throw ConfigError("/probes", "expected a non-negative integer");
        cfg.probes = doc.at("probes").get<int>();
    }
    return cfg;
}

RunConfig parse_config_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace hopf
