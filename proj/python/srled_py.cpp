#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "srled/config.hpp"
#include "srled/errors.hpp"
#include "srled/presets.hpp"
#include "srled/property_suite.hpp"
#include "srled/runner.hpp"
#include "srled/solver.hpp"

namespace py = pybind11;
using namespace srled;

namespace {

std::vector<Override> to_overrides(const std::map<std::string, std::string>& m) {
    return {m.begin(), m.end()};
}

SolverConfig solver_config(std::string_view backend) {
    SolverConfig c;
    c.backend = quad_backend_from_string(backend);
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Population fluctuations in superradiant and conventional nanolaser LEDs";
    m.attr("__version__") = SRLED_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<StabilityViolation>(m, "StabilityViolation", base.ptr());

    py::enum_<SpectrumVariant>(m, "SpectrumVariant")
        .value("ZeroOrder", SpectrumVariant::ZeroOrder)
        .value("SpontaneousOnly", SpectrumVariant::SpontaneousOnly)
        .value("Perturbative", SpectrumVariant::Perturbative)
        .value("NonPerturbative", SpectrumVariant::NonPerturbative);

    py::class_<DeviceParams>(m, "DeviceParams")
        .def(py::init<>())
        .def_readwrite("lambda0", &DeviceParams::lambda0)
        .def_readwrite("n_r", &DeviceParams::n_r)
        .def_readwrite("dipole", &DeviceParams::dipole)
        .def_readwrite("n_c", &DeviceParams::n_c)
        .def_readwrite("N0", &DeviceParams::N0)
        .def_readwrite("gamma_perp", &DeviceParams::gamma_perp)
        .def_readwrite("gamma_par", &DeviceParams::gamma_par)
        .def_readwrite("kappa", &DeviceParams::kappa)
        .def_readwrite("f", &DeviceParams::f)
        .def("validate", &DeviceParams::validate)
        .def(py::self == py::self);

    py::class_<DerivedRates>(m, "DerivedRates")
        .def_readonly("omega0", &DerivedRates::omega0)
        .def_readonly("V_min", &DerivedRates::V_min)
        .def_readonly("V_c", &DerivedRates::V_c)
        .def_readonly("Omega", &DerivedRates::Omega)
        .def_readonly("g_diff", &DerivedRates::g_diff)
        .def_readonly("beta", &DerivedRates::beta)
        .def_readonly("N_th", &DerivedRates::N_th)
        .def_readonly("kappa", &DerivedRates::kappa)
        .def_readonly("gamma_perp", &DerivedRates::gamma_perp)
        .def_readonly("gamma_par", &DerivedRates::gamma_par)
        .def_readonly("f", &DerivedRates::f)
        .def_readonly("N0", &DerivedRates::N0);

    m.def("derive_rates", &derive_rates, py::arg("params"));
    m.def("exchange_decay_rates", &exchange_decay_rates, py::arg("params"));

    py::class_<MediumState>(m, "MediumState")
        .def_static("from_upper", &MediumState::from_upper, py::arg("N_e"), py::arg("N0"),
                    py::arg("delta2_Ne") = 0.0, py::arg("P") = 0.0)
        .def_readwrite("N_e", &MediumState::N_e)
        .def_readwrite("N_g", &MediumState::N_g)
        .def_readwrite("N", &MediumState::N)
        .def_readwrite("delta2_Ne", &MediumState::delta2_Ne)
        .def_readwrite("P", &MediumState::P);

    m.def("spectrum", &spectrum, py::arg("omega"), py::arg("rates"), py::arg("state"),
          py::arg("variant"), "Photon-number spectral density n(omega).");
    m.def("stability_margin", &stability_margin, py::arg("rates"), py::arg("state"));
    m.def(
        "photon_number",
        [](const DerivedRates& r, const MediumState& s, SpectrumVariant v, std::string_view backend) {
            return integrate_spectrum(r, s, v, solver_config(backend)).n;
        },
        py::arg("rates"), py::arg("state"), py::arg("variant"), py::arg("backend") = "residue");

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def_readonly("P", &OperatingPoint::P)
        .def_readonly("N_e", &OperatingPoint::N_e)
        .def_readonly("N_g", &OperatingPoint::N_g)
        .def_readonly("N", &OperatingPoint::N)
        .def_readonly("delta2_Ne", &OperatingPoint::delta2_Ne)
        .def_readonly("n", &OperatingPoint::n)
        .def_readonly("p_out", &OperatingPoint::p_out)
        .def_readonly("variant", &OperatingPoint::variant)
        .def_property_readonly("residual", [](const OperatingPoint& o) { return o.diagnostics.residual; })
        .def_property_readonly("stability_margin",
                               [](const OperatingPoint& o) { return o.diagnostics.stability_margin; })
        .def_property_readonly("narrowness_ratio",
                               [](const OperatingPoint& o) { return o.diagnostics.narrowness_ratio; })
        .def_property_readonly("warnings", [](const OperatingPoint& o) { return o.diagnostics.warnings; })
        .def("state", &OperatingPoint::state);

    m.def(
        "solve_operating_point",
        [](double P, const DeviceParams& params, SpectrumVariant v, std::string_view pf,
           std::string_view backend) {
            return solve_operating_point(P, params, v, PFModel{pf_kind_from_string(pf)},
                                         solver_config(backend));
        },
        py::arg("P"), py::arg("params"), py::arg("variant") = SpectrumVariant::NonPerturbative,
        py::arg("pf_model") = "binomial", py::arg("backend") = "residue");
    m.def(
        "enhancement_factor",
        [](double P, const DeviceParams& params, std::string_view pf) {
            return enhancement_factor(P, params, PFModel{pf_kind_from_string(pf)});
        },
        py::arg("P"), py::arg("params"), py::arg("pf_model") = "binomial");

    py::class_<Row>(m, "Row")
        .def_readonly("x", &Row::x)
        .def_readonly("value", &Row::value)
        .def_readonly("N_e", &Row::N_e)
        .def_readonly("n", &Row::n)
        .def_readonly("delta2_Ne", &Row::delta2_Ne)
        .def_readonly("stability_margin", &Row::stability_margin)
        .def_readonly("narrowness_ratio", &Row::narrowness_ratio)
        .def_readonly("residual", &Row::residual)
        .def_readonly("status", &Row::status);
    py::class_<Table>(m, "Table")
        .def_readonly("name", &Table::name)
        .def_readonly("rows", &Table::rows)
        .def("to_csv", &write_csv);
    py::class_<RunResult>(m, "RunResult")
        .def_readonly("tables", &RunResult::tables)
        .def_readonly("manifest_json", &RunResult::manifest_json)
        .def("write", &write_outputs, py::arg("directory"));

    m.def("preset_names", &preset_names);
    m.def(
        "run_preset",
        [](std::string_view name, const std::map<std::string, std::string>& overrides) {
            py::gil_scoped_release release;
            return run_preset(name, RunConfig{}, to_overrides(overrides));
        },
        py::arg("name"), py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "run_sweep",
        [](const std::vector<double>& pumps,
           const std::vector<std::pair<std::string, std::vector<std::string>>>& axes,
           SpectrumVariant v, const std::map<std::string, std::string>& overrides) {
            py::gil_scoped_release release;
            return run_sweep(SweepSpec{pumps, axes, v}, RunConfig{}, to_overrides(overrides));
        },
        py::arg("pumps"), py::arg("axes") = std::vector<std::pair<std::string, std::vector<std::string>>>{},
        py::arg("variant") = SpectrumVariant::NonPerturbative,
        py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "run_property_suite",
        [](std::uint64_t seed) {
            PropertyReport report;
            {
                py::gil_scoped_release release;
                report = run_property_suite(seed);
            }
            py::list rows;
            for (const auto& c : report.cases) {
                py::dict d;
                d["suite"] = c.suite;
                d["name"] = c.name;
                d["pass"] = c.pass;
                d["measured"] = c.measured;
                d["tolerance"] = c.tolerance;
                d["detail"] = c.detail;
                rows.append(d);
            }
            return rows;
        },
        py::arg("seed") = 20240601);
}
