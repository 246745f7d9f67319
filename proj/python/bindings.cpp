#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopf/config.hpp"
#include "hopf/curve_spec.hpp"
#include "hopf/dalembert.hpp"
#include "hopf/errors.hpp"
#include "hopf/hermitian.hpp"
#include "hopf/legendrian.hpp"
#include "hopf/run.hpp"
#include "hopf/verify.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

hopf::AmbientVector ambient(const Eigen::VectorXcd& v) { return hopf::AmbientVector(v); }

// JSON crosses the boundary as text; the python side wraps it with json.loads.
hopf::RunConfig config_from(const std::string& text) { return hopf::parse_config_text(text); }

hopf::RunMode mode_from(const std::string& name)
{
    if (name == "construct")
        return hopf::RunMode::Construct;
    if (name == "verify")
        return hopf::RunMode::Verify;
    throw hopf::InputError("mode must be 'construct' or 'verify'");
}

py::dict hopf_check_dict(const hopf::HopfCheck& c)
{
    py::dict d;
    d["defect"] = c.defect;
    d["measured_alpha"] = c.measured_alpha;
    d["constructed_alpha"] = c.constructed_alpha;
    d["constructed_defect"] = c.constructed_defect;
    d["asymmetry"] = c.asymmetry;
    d["principal_curvatures"] = c.principal_curvatures;
    return d;
}

} // namespace

PYBIND11_MODULE(_hopf, m) {
    m.doc() = "Hopf hypersurfaces in complex hyperbolic space from pairs of Legendrian curves";

    auto base = py::register_exception<hopf::Error>(m, "HopfError", PyExc_RuntimeError);
    py::register_exception<hopf::ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<hopf::RegimeError>(m, "RegimeError", base.ptr());
    py::register_exception<hopf::InputError>(m, "InputError", base.ptr());
    py::register_exception<hopf::DomainError>(m, "DomainError", base.ptr());
    py::register_exception<hopf::BranchObstructionError>(m, "BranchObstructionError", base.ptr());

    py::class_<hopf::HopfParams>(m, "HopfParams")
        .def_static("from_phi", &hopf::HopfParams::from_phi, py::arg("r"), py::arg("phi"))
        .def_static("from_alpha", &hopf::HopfParams::from_alpha, py::arg("r"), py::arg("alpha"))
        .def_property_readonly("r", &hopf::HopfParams::r)
        .def_property_readonly("phi", &hopf::HopfParams::phi)
        .def_property_readonly("alpha", &hopf::HopfParams::alpha)
        .def_property_readonly("tau_constant", &hopf::HopfParams::tau_constant)
        .def("__repr__", [](const hopf::HopfParams& p) {
            return "HopfParams(r=" + hopf::format_real(p.r()) + ", phi=" + hopf::format_real(p.phi()) + ")";
        });

    m.def("herm", [](const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
        return hopf::herm_form(ambient(z), ambient(w));
    }, py::arg("z"), py::arg("w"));
    m.def("real_form", [](const Eigen::VectorXcd& z, const Eigen::VectorXcd& w) {
        return hopf::real_form(ambient(z), ambient(w));
    }, py::arg("z"), py::arg("w"));
    m.def("to_ball_chart", [](const Eigen::VectorXcd& z) { return hopf::to_ball_chart(ambient(z)); });
    m.def("to_sphere_chart", [](const Eigen::VectorXcd& n) { return hopf::to_sphere_chart(ambient(n)); });

    py::class_<hopf::ContactCurve>(m, "ContactCurve")
        .def("mu", &hopf::ContactCurve::mu)
        .def("beta", &hopf::ContactCurve::beta)
        .def("gamma", &hopf::ContactCurve::gamma)
        .def("contact_identity", &hopf::ContactCurve::contact_identity)
        .def("contact_defect", [](const hopf::ContactCurve& c, double t) { return hopf::contact_defect(c, t); })
        .def("lift", [](const hopf::ContactCurve& c, double t) { return hopf::lift(c, t).coords(); })
        .def_property_readonly("domain", [](const hopf::ContactCurve& c) {
            return py::make_tuple(c.domain().lo, c.domain().hi);
        });

    m.def("_curve_from_json", [](const std::string& text) { return hopf::curve_from_json(json::parse(text)); });
    m.def("curve_preset_names", &hopf::curve_preset_names);

    py::class_<hopf::DalembertPatch, std::shared_ptr<hopf::DalembertPatch>>(m, "DalembertPatch")
        .def_property_readonly("n", &hopf::DalembertPatch::n)
        .def_property_readonly("params", &hopf::DalembertPatch::params)
        .def("zeta", [](const hopf::DalembertPatch& p, double s, double t) {
            const double x[2] = {s, t};
            return p.zeta_at(x);
        })
        .def("tau", [](const hopf::DalembertPatch& p, double s, double t) {
            const double x[2] = {s, t};
            return p.tau_at(x);
        })
        .def("point", [](const hopf::DalembertPatch& p, double s, double t, double u) {
            const double x[2] = {s, t};
            return p.lift_jet(x, u).z.coords();
        }, py::arg("s"), py::arg("t"), py::arg("u"))
        .def("ball_point", [](const hopf::DalembertPatch& p, double s, double t, double u) {
            const double x[2] = {s, t};
            return p.surface_point(x, u).w;
        }, py::arg("s"), py::arg("t"), py::arg("u"))
        .def("hopf_check", [](const hopf::DalembertPatch& p, double s, double t, double u, double fd_step) {
            const double x[2] = {s, t};
            hopf::ShapeOptions opts;
            opts.fd_step = fd_step;
            return hopf_check_dict(hopf::hopf_defect(p, x, u, opts));
        }, py::arg("s"), py::arg("t"), py::arg("u"), py::arg("fd_step") = 1e-5);

    m.def("_build_patch", [](const std::string& text) { return hopf::build_patch(config_from(text)); });
    m.def("_evaluate", [](const std::string& text, const std::string& mode) {
        const hopf::RunResult res = hopf::evaluate(config_from(text), mode_from(mode));
        return py::make_tuple(res.document.dump(), res.csv, res.passed);
    });
    m.def("_run", [](const std::string& text, const std::string& mode) {
        const hopf::RunResult res = hopf::run(config_from(text), mode_from(mode));
        return py::make_tuple(res.document.dump(), res.csv, res.passed);
    });
    m.def("_check_curves", [](const std::string& text, double fd_step) {
        bool passed = true;
        const json doc = hopf::check_curves(json::parse(text), fd_step, passed);
        return py::make_tuple(doc.dump(), passed);
    });
}
