// hopfdal: construct and verify d'Alembert Hopf hypersurfaces from a JSON config.
//
//   hopfdal construct   --config run.json   build the grid and write outputs
//   hopfdal verify      --config run.json   full run with shape-operator checks
//   hopfdal check-curve --config run.json   contact checks of the boundary curves
//
// Exit status: 0 when every check passes, 1 when a check fails, 2 on errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hopf/config.hpp"
#include "hopf/errors.hpp"
#include "hopf/run.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<double> fd_step;
    std::optional<double> tol_hopf;
    std::optional<std::uint64_t> seed;
};

nlohmann::json read_document(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw hopf::ConfigError("", "cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw hopf::ConfigError("", std::string("malformed JSON: ") + e.what());
    }
}

hopf::RunConfig load(const Overrides& o)
{
    hopf::RunConfig cfg = hopf::parse_config(read_document(o.config));
    if (o.fd_step)
        cfg.fd_step = *o.fd_step;
    if (o.tol_hopf)
        cfg.tolerances.hopf = *o.tol_hopf;
    if (o.seed)
        cfg.seed = *o.seed;
    return cfg;
}

int run_mode(const Overrides& o, hopf::RunMode mode)
{
    const hopf::RunResult result = hopf::run(load(o), mode);
    nlohmann::json out = {{"counts", result.document["counts"]},
                          {"flags", result.document["flags"]},
                          {"checks", result.document["checks"]},
                          {"passed", result.passed}};
    std::cout << out.dump(2) << "\n";
    return result.passed ? 0 : 1;
}

int check_curve(const Overrides& o)
{
    const nlohmann::json doc = read_document(o.config);
    double fd_step = 1e-5;
    if (doc.contains("fd_step") && doc.at("fd_step").is_number())
        fd_step = doc.at("fd_step").get<double>();
    if (o.fd_step)
        fd_step = *o.fd_step;
    bool passed = false;
    const nlohmann::json report = hopf::check_curves(doc, fd_step, passed);
    std::cout << report.dump(2) << "\n";
    return passed ? 0 : 1;
}

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--fd-step", o.fd_step, "finite-difference step for the shape operator")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol-hopf", o.tol_hopf, "tolerance on the Hopf defect")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "seed for the random rank probes");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hopf hypersurfaces in complex hyperbolic space from Legendrian boundary data"};
    app.require_subcommand(1);
    Overrides o;
    auto* construct = app.add_subcommand("construct", "build the grid and export, skipping verification");
    auto* verify = app.add_subcommand("verify", "build, verify the Hopf property and export");
    auto* check = app.add_subcommand("check-curve", "validate the Legendrian boundary curves only");
    for (auto* cmd : {construct, verify, check})
        add_common(cmd, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*construct)
            return run_mode(o, hopf::RunMode::Construct);
        if (*verify)
            return run_mode(o, hopf::RunMode::Verify);
        return check_curve(o);
    } catch (const hopf::Error& e) {
        std::cerr << "hopfdal: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "hopfdal: " << e.what() << "\n";
        return 2;
    }
}
