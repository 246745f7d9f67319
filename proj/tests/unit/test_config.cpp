#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "hopf/config.hpp"
#include "hopf/errors.hpp"

using namespace hopf;
using nlohmann::json;

namespace {

json base()
{
    return json::parse(R"({
        "params": {"r": 1, "phi": 0.2},
        "preset": "mixed-pair",
        "grid": {"s_range": [0, 1], "t_range": [0.5, 1.5], "u_range": [-1, 1], "counts": [4, 4, 3]}
    })");
}

std::string error_path(const json& doc)
{
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "no error";
}

} // namespace

TEST_CASE("params accept phi or alpha")
{
    json doc = base();
    doc["params"] = {{"r", 1}, {"alpha", 0}};
    CHECK(parse_config(doc).params.phi() == 0.0);
    doc["params"] = {{"r", 2}, {"phi", std::numbers::pi / 6}};
    CHECK(parse_config(doc).params.alpha() == Catch::Approx(0.5).epsilon(1e-15));
    doc["params"] = {{"r", 1}, {"alpha", 2.5}};
    CHECK_THROWS_AS(parse_config(doc), RegimeError);
    try {
        parse_config(doc);
    } catch (const RegimeError& e) {
        CHECK(std::string(e.what()).find("small-alpha") != std::string::npos);
    }
    doc["params"] = {{"r", 1}, {"alpha", 0.1}, {"phi", 0.1}};
    CHECK(error_path(doc) == "/params");
    doc["params"] = {{"r", -1}, {"phi", 0.1}};
    CHECK(error_path(doc) == "/params/r");
}

TEST_CASE("grid validation")
{
    json doc = base();
    doc["grid"]["u_range"] = {1.0, 1.0};
    CHECK(error_path(doc) == "/grid/u_range");
    doc = base();
    doc["grid"]["counts"] = {4, 1, 3};
    CHECK(error_path(doc) == "/grid/counts/1");
    doc = base();
    doc["grid"].erase("t_range");
    CHECK(error_path(doc) == "/grid/t_range");
    doc = base();
    doc["grid"]["counts"] = {4, 4};
    CHECK(error_path(doc) == "/grid/counts");
}

TEST_CASE("curves, tolerances, outputs")
{
    json doc = base();
    RunConfig cfg = parse_config(doc);
    CHECK(cfg.curve1["preset"] == "great-circle");
    CHECK(cfg.curve2["preset"] == "tilted-circle");
    CHECK(cfg.tolerances.hopf == 1e-3);
    CHECK(cfg.fd_step == 1e-5);
    CHECK(cfg.outputs.projection == Eigen::Matrix<double, 3, 4>::Identity());

    doc["curve2"] = {{"preset", "great-circle"}};
    doc["tolerances"] = {{"hopf", 1e-4}, {"w_curve", 1e-7}};
    doc["outputs"] = {{"mesh_path", "a.ply"}, {"projection", {0, 2, 3}}};
    doc["seed"] = 42;
    cfg = parse_config(doc);
    CHECK(cfg.curve2["preset"] == "great-circle");
    CHECK(cfg.tolerances.hopf == 1e-4);
    CHECK(cfg.tolerances.w_curve == 1e-7);
    CHECK(cfg.seed == 42);
    CHECK(cfg.outputs.projection(1, 2) == 1.0);
    CHECK(cfg.outputs.projection(2, 3) == 1.0);
    CHECK(cfg.outputs.projection.sum() == 3.0);

    doc["outputs"]["projection"] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0.5, 0.5}};
    CHECK(parse_config(doc).outputs.projection(2, 3) == 0.5);
    doc["outputs"]["projection"] = {0, 1, 4};
    CHECK(error_path(doc) == "/outputs/projection/2");
    doc["outputs"] = {{"mesh_path", "a.stl"}};
    CHECK(error_path(doc) == "/outputs/mesh_path");
    doc = base();
    doc["tolerances"] = {{"hopff", 1e-3}};
    CHECK(error_path(doc) == "/tolerances/hopff");
    doc = base();
    doc.erase("preset");
    CHECK(error_path(doc) == "/curve1");
    doc = base();
    doc["preset"] = "unknown-pair";
    CHECK(error_path(doc) == "/preset");
}

TEST_CASE("malformed documents")
{
    CHECK_THROWS_AS(parse_config_text("{\"params\": "), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
