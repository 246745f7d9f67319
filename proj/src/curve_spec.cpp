#include "hopf/curve_spec.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "hopf/errors.hpp"
#include "hopf/spline.hpp"

namespace hopf {

namespace {

using nlohmann::json;

constexpr int kTableRefinement = 8;

double number_or(const json& obj, const char* key, double fallback, const std::string& path)
{
    if (!obj.contains(key))
        return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(path + "/" + key, "expected a number");
    return v.get<double>();
}

double required_number(const json& obj, const char* key, const std::string& path)
{
    if (!obj.contains(key))
        throw ConfigError(path + "/" + key, "missing required number");
    return number_or(obj, key, 0.0, path);
}

Interval domain_or(const json& obj, Interval fallback, const std::string& path)
{
    if (!obj.contains("domain"))
        return fallback;
    const json& d = obj.at("domain");
    if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
        throw ConfigError(path + "/domain", "expected [lo, hi]");
    Interval out{d[0].get<double>(), d[1].get<double>()};
    if (!(out.hi > out.lo))
        throw ConfigError(path + "/domain", "empty interval");
    return out;
}

std::vector<double> number_array(const json& obj, const char* key, const std::string& path)
{
    if (!obj.contains(key) || !obj.at(key).is_array())
        throw ConfigError(path + "/" + key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : obj.at(key)) {
        if (!v.is_number())
            throw ConfigError(path + "/" + key, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

ContactCurve preset_curve(const std::string& name, const json& params, const std::string& path)
{
    const std::string ppath = path + "/params";
    if (!params.is_object())
        throw ConfigError(ppath, "expected an object");
    const double beta0 = number_or(params, "beta0", 0.0, ppath);

    try {
        if (name == "great-circle") {
            return great_circle_curve(beta0, number_or(params, "gamma0", 0.0, ppath),
                                      domain_or(params, {-50.0, 50.0}, ppath));
        }
        if (name == "tilted-circle") {
            return tilted_circle_curve(required_number(params, "m", ppath), beta0,
                                       number_or(params, "gamma0", 0.0, ppath),
                                       domain_or(params, {-50.0, 50.0}, ppath));
        }
        if (name == "wavy") {
            const double m = number_or(params, "m", 0.6, ppath);
            const double amplitude = number_or(params, "amplitude", 0.3, ppath);
            const double frequency = number_or(params, "frequency", 1.0, ppath);
            const double rate = number_or(params, "gamma_rate", 1.0, ppath);
            const double step = number_or(params, "step", 1e-2, ppath);
            const Interval domain = domain_or(params, {-10.0, 10.0}, ppath);
            if (!(step > 0.0))
                throw ConfigError(ppath + "/step", "must be positive");
            const auto count = static_cast<std::size_t>(std::ceil(domain.length() / step)) + 1;
            std::vector<double> grid(count);
            for (std::size_t k = 0; k < count; ++k)
                grid[k] = domain.lo + domain.length() * static_cast<double>(k) / static_cast<double>(count - 1);
            AngleFunction mu{[=](double t) { return m + amplitude * std::sin(frequency * t); },
                             [=](double t) { return amplitude * frequency * std::cos(frequency * t); }};
            return solve_contact_beta(mu, AngleFunction::affine(rate, 0.0), beta0, std::move(grid));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + "/preset", "unknown curve preset '" + name + "'");
}

ContactCurve table_curve(const json& table, const std::string& path)
{
    if (!table.is_object())
        throw ConfigError(path, "expected an object");
    const auto t = number_array(table, "t", path);
    const auto mu = number_array(table, "mu", path);
    const auto gamma = number_array(table, "gamma", path);
    const double beta0 = required_number(table, "beta0", path);
    if (t.size() < 2 || mu.size() != t.size() || gamma.size() != t.size())
        throw ConfigError(path, "t, mu and gamma must have equal length >= 2");

    try {
        auto mu_spline = std::make_shared<CubicSpline>(t, mu);
        auto gamma_spline = std::make_shared<CubicSpline>(t, gamma);
        AngleFunction mu_fn{[mu_spline](double x) { return mu_spline->value(x); },
                            [mu_spline](double x) { return mu_spline->derivative(x); }};
        AngleFunction gamma_fn{[gamma_spline](double x) { return gamma_spline->value(x); },
                               [gamma_spline](double x) { return gamma_spline->derivative(x); }};
        std::vector<double> grid;
        for (std::size_t k = 0; k + 1 < t.size(); ++k)
            for (int j = 0; j < kTableRefinement; ++j)
                grid.push_back(t[k] + (t[k + 1] - t[k]) * j / kTableRefinement);
        grid.push_back(t.back());
        return solve_contact_beta(mu_fn, gamma_fn, beta0, std::move(grid));
    } catch (const SingularOdeError& e) {
        throw ConfigError(path, e.what());
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

} // namespace

ContactCurve curve_from_json(const json& spec, const std::string& path)
{
    if (!spec.is_object())
        throw ConfigError(path, "curve spec must be an object");
    if (spec.contains("preset")) {
        if (!spec.at("preset").is_string())
            throw ConfigError(path + "/preset", "expected a string");
        return preset_curve(spec.at("preset").get<std::string>(), spec.value("params", json::object()), path);
    }
    if (spec.contains("table"))
        return table_curve(spec.at("table"), path + "/table");
    throw ConfigError(path, "curve spec needs either \"preset\" or \"table\"");
}

std::vector<std::string> curve_preset_names()
{
    return {"great-circle", "tilted-circle", "wavy"};
}

} // namespace hopf
