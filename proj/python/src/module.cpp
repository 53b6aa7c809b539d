#include "fslphase/gravimetry.hpp"
#include "fslphase/oracle.hpp"
#include "fslphase/scenario_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace fslphase;

namespace {

py::dict breakdown_dict(const PhaseBreakdown& b) {
    py::dict d;
    d["unperturbed"] = b.unperturbed;
    d["fsl_clock"] = b.fsl_clock;
    d["fsl_doppler"] = b.fsl_doppler;
    d["chirp"] = b.chirp;
    d["time_dilation"] = b.time_dilation;
    d["ts_clock"] = b.ts_clock;
    d["ts_doppler"] = b.ts_doppler;
    d["ts_chirp"] = b.ts_chirp;
    d["perturbation"] = b.perturbation;
    d["total"] = b.total;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-speed-of-light phase shifts in light-pulse atom interferometers";

    py::class_<ScenarioFile>(m, "Scenario")
        .def_static("from_json", &parse_scenario, py::arg("text"))
        .def_static("from_file", [](const std::string& path) { return load_scenario(path); }, py::arg("path"))
        .def("to_json", &dump_scenario)
        .def_property_readonly("mechanism", [](const ScenarioFile& f) { return std::string(to_string(f.scenario.mechanism.kind)); })
        .def_property_readonly("g", [](const ScenarioFile& f) { return f.scenario.g; })
        .def_property_readonly("sigma", [](const ScenarioFile& f) { return f.scenario.sigma; })
        .def_property_readonly("c", [](const ScenarioFile& f) { return f.scenario.constants.c; })
        .def_property_readonly("compensated", [](const ScenarioFile& f) { return f.compensation.enabled; })
        .def_property_readonly("pulse_times", [](const ScenarioFile& f) {
            std::vector<double> out;
            for (const auto& p : f.scenario.geometry.pulses()) out.push_back(p.time);
            return out;
        });

    m.def("phase", [](const ScenarioFile& f) { return breakdown_dict(total_phase(f.scenario)); }, py::arg("scenario"),
          "Unperturbed phase and first-order contributions (rad).");

    m.def(
        "gravimetry",
        [](const ScenarioFile& f, std::optional<double> delta_phi, std::optional<double> delta_v0) {
            const OffsetReport r = offset_report(f.scenario);
            py::dict d;
            d["mechanism"] = std::string(to_string(r.mechanism));
            d["gamma_analytic"] = r.gamma_analytic;
            d["gamma_numeric"] = r.gamma_numeric;
            d["g_root"] = r.g_root;
            if (delta_phi && delta_v0) {
                const ErrorBudget eb = error_budget(f.scenario, *delta_phi, *delta_v0, f.compensation.enabled,
                                                    f.compensation.Gamma);
                d["delta_g"] = eb.delta_g;
                d["phase_term"] = eb.phase_term;
                d["velocity_term"] = eb.velocity_term;
            }
            return d;
        },
        py::arg("scenario"), py::arg("delta_phi") = py::none(), py::arg("delta_v0") = py::none(),
        "Zero-fringe offset and, for SPT with uncertainties given, the error budget.");

    m.def(
        "sweep",
        [](const ScenarioFile& f, const std::string& param, double start, double stop, int count,
           const std::string& scale) {
            const auto sc = parse_sweep_scale(scale);
            if (!sc) throw SchemaError("scale", "expected 'linear' or 'log'");
            const auto rows = run_sweep(dump_scenario(f), {param, start, stop, count, *sc});
            py::list out;
            for (const auto& r : rows) {
                py::dict d = breakdown_dict(r.breakdown);
                d["param_value"] = r.param_value;
                out.append(d);
            }
            return out;
        },
        py::arg("scenario"), py::arg("param"), py::arg("start"), py::arg("stop"), py::arg("count"),
        py::arg("scale") = "linear");

    m.def(
        "oracle",
        [](const ScenarioFile& f, std::optional<std::vector<double>> c_tilde) {
            const OracleRun run = extract_series(f.scenario, c_tilde ? *c_tilde : default_c_tilde_grid());
            const OracleVerdict v = verdict(run);
            py::dict d;
            d["c_tilde"] = run.c_tilde_values;
            d["exact_phase"] = run.exact_phases;
            d["model_phase"] = run.model_phases;
            d["residual"] = run.residuals;
            d["unperturbed"] = run.unperturbed;
            d["a0"] = run.fit.a0;
            d["a1"] = run.fit.a1;
            d["a2"] = run.fit.a2;
            d["a1_model"] = run.model_fit.a1;
            d["a0_error"] = v.a0_error;
            d["a1_error"] = v.a1_error;
            d["residual_slope"] = run.fit_residual_slope;
            d["passed"] = v.pass();
            return d;
        },
        py::arg("scenario"), py::arg("c_tilde") = py::none(),
        "Exact phases at reduced light speeds and the 1/c_tilde series fit.");

    m.def(
        "e1m1_differential_phase",
        [](double v_B, double T, double k_A, double g) {
            return e1m1_differential_phase(v_B, T, k_A, g, PhysicalConstants::codata());
        },
        py::arg("v_B"), py::arg("T"), py::arg("k_A"), py::arg("g"));

    m.def("compensation_delay",
          [](const std::string& mechanism, double g, double Gamma, double sigma, double T) {
              const auto kind = parse_mechanism(mechanism);
              if (!kind) throw SchemaError("mechanism", "unknown mechanism '" + mechanism + "'");
              return compensation_delay(*kind, g, Gamma, sigma, T, PhysicalConstants::codata());
          },
          py::arg("mechanism"), py::arg("g"), py::arg("Gamma"), py::arg("sigma"), py::arg("T"));
}
