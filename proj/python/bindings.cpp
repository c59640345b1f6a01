// Copyright 2026 The combtrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Plain structs map to classes with read/write fields;
// density matrices cross the boundary as complex NumPy arrays.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "combtrap/comb.hpp"
#include "combtrap/config.hpp"
#include "combtrap/dynamics.hpp"
#include "combtrap/grating.hpp"
#include "combtrap/msgate.hpp"
#include "combtrap/runner.hpp"
#include "combtrap/spectroscopy.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace combtrap;

namespace {

py::list cells(const Table& table)
{
    py::list rows;
    for (const auto& row : table.rows) {
        py::tuple t(row.size());
        for (std::size_t i = 0; i < row.size(); ++i)
            t[i] = std::visit([](const auto& v) { return py::cast(v); }, row[i]);
        rows.append(t);
    }
    return rows;
}

RunOptions options(std::optional<std::string> out, std::optional<std::string> format, int threads, bool exact)
{
    RunOptions o;
    o.out = std::move(out);
    if (format) {
        if (*format != "csv" && *format != "json")
            throw InvalidParameter("format must be csv or json");
        o.format = *format == "csv" ? OutputFormat::csv : OutputFormat::json;
    }
    o.threads = threads;
    o.force_exact = exact;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Frequency-comb driven trapped-ion simulator (compiled core)";
    m.attr("__version__") = COMBTRAP_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
    py::register_exception<NotOnResonance>(m, "NotOnResonance", base.ptr());
    py::register_exception<InvalidRatio>(m, "InvalidRatio", base.ptr());
    py::register_exception<InsufficientScan>(m, "InsufficientScan", base.ptr());
    // Carry the structured payloads as exception attributes.
    // Kept as bare handles: the module owns the types.
    static py::handle schema = py::exception<SchemaError>(m, "SchemaError", base.ptr());
    static py::handle cutoff = py::exception<CutoffTooSmall>(m, "CutoffTooSmall", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const SchemaError& e) {
            py::object err = schema(e.what());
            err.attr("problems") = py::cast(e.problems());
            PyErr_SetObject(schema.ptr(), err.ptr());
        } catch (const CutoffTooSmall& e) {
            py::object err = cutoff(e.what());
            err.attr("leakage") = e.leakage();
            PyErr_SetObject(cutoff.ptr(), err.ptr());
        }
    });

    // comb
    py::enum_<Envelope>(m, "Envelope").value("sech", Envelope::sech).value("gaussian", Envelope::gaussian);
    py::enum_<Resonance>(m, "Resonance")
        .value("integer", Resonance::integer)
        .value("half_integer", Resonance::half_integer)
        .value("off_resonant", Resonance::off_resonant);

    py::class_<TrapMode>(m, "TrapMode")
        .def(py::init<>())
        .def(py::init([](double f, double eta) { return TrapMode{f, eta}; }), "trap_frequency_hz"_a,
             "lamb_dicke"_a)
        .def_readwrite("trap_frequency_hz", &TrapMode::trap_frequency_hz)
        .def_readwrite("lamb_dicke", &TrapMode::lamb_dicke);

    py::class_<IonSpec>(m, "IonSpec")
        .def(py::init<>())
        .def_readwrite("qubit_splitting_hz", &IonSpec::qubit_splitting_hz)
        .def_readwrite("detuning_hz", &IonSpec::detuning_hz)
        .def_readwrite("linewidth_hz", &IonSpec::linewidth_hz)
        .def_readwrite("saturation_intensity", &IonSpec::saturation_intensity)
        .def_readwrite("modes", &IonSpec::modes)
        .def("problems", &IonSpec::problems);

    py::class_<PulseTrainSpec>(m, "PulseTrainSpec")
        .def(py::init<>())
        .def_readwrite("carrier_frequency_hz", &PulseTrainSpec::carrier_frequency_hz)
        .def_readwrite("rep_rate_hz", &PulseTrainSpec::rep_rate_hz)
        .def_readwrite("pulse_duration_s", &PulseTrainSpec::pulse_duration_s)
        .def_readwrite("envelope", &PulseTrainSpec::envelope)
        .def_readwrite("pick_divisor", &PulseTrainSpec::pick_divisor)
        .def_readwrite("pulse_count", &PulseTrainSpec::pulse_count)
        .def_readwrite("intensity_ratio", &PulseTrainSpec::intensity_ratio)
        .def("problems", &PulseTrainSpec::problems);

    py::class_<QParameter>(m, "QParameter")
        .def_readonly("value", &QParameter::value)
        .def_readonly("nearest", &QParameter::nearest)
        .def_readonly("resonance", &QParameter::resonance);

    py::class_<RamanCoupling>(m, "RamanCoupling")
        .def_readonly("omega", &RamanCoupling::omega)
        .def_readonly("omega0", &RamanCoupling::omega0)
        .def_readonly("suppression", &RamanCoupling::suppression)
        .def_readonly("omega_tooth_sum", &RamanCoupling::omega_tooth_sum)
        .def_readonly("q_teeth", &RamanCoupling::q_teeth);

    m.def("q_parameter", &q_parameter, "ion"_a, "spec"_a, "tol_q"_a = kDefaultQTolerance);
    m.def("effective_period", &effective_period, "spec"_a);
    m.def("suppression_factor", &suppression_factor, "omega0_tau"_a, "envelope"_a = Envelope::sech);
    m.def("raman_coupling", &raman_coupling, "ion"_a, "spec"_a);
    m.def("raman_rabi_frequency", &raman_rabi_frequency, "ion"_a, "spec"_a, "tol_q"_a = kDefaultQTolerance);
    m.def("pulse_area", py::overload_cast<const IonSpec&, const PulseTrainSpec&, double>(&pulse_area), "ion"_a,
          "spec"_a, "tol_q"_a = kDefaultQTolerance);
    m.def("grating_sum", &grating_sum, "theta"_a, "pulses"_a);
    m.def("min_pulses_for_resolution", &min_pulses_for_resolution, "omega_t"_a, "period"_a, "eta"_a);

    // spectroscopy
    m.def(
        "carrier_rabi_scan",
        [](const IonSpec& ion, const PulseTrainSpec& spec, std::vector<double> durations, int threads) {
            RabiScanOptions o;
            o.threads = threads;
            std::vector<std::tuple<double, long, double>> out;
            for (const auto& r : carrier_rabi_scan(ion, spec, durations, o))
                out.emplace_back(r.time_s, r.pulses, r.p_up);
            return out;
        },
        "ion"_a, "spec"_a, "durations_s"_a, "threads"_a = 1, "Rows of (time_s, pulses, p_up).");

    m.def(
        "sideband_spectrum",
        [](const IonSpec& ion, const PulseTrainSpec& spec, std::vector<double> grid_hz, double probe_duration_s,
           std::vector<double> initial_nbar, double theta_p, int cutoff, bool exact, int threads) {
            SpectrumScanConfig cfg;
            cfg.delta_omega_grid_hz = std::move(grid_hz);
            cfg.probe_duration_s = probe_duration_s;
            cfg.modes = ion.modes;
            cfg.initial_nbar = std::move(initial_nbar);
            cfg.theta_p = theta_p;
            cfg.cutoff = cutoff;
            cfg.exact = exact;
            cfg.threads = threads;
            Warnings w;
            const auto r = sideband_spectrum(ion, spec, cfg, &w);
            std::vector<double> p;
            std::vector<std::vector<std::string>> labels;
            for (const auto& row : r.rows) {
                p.push_back(row.flip_probability);
                labels.push_back(row.branch_labels);
            }
            return py::dict("p_flip"_a = p, "branches"_a = labels, "pulses"_a = r.pulses, "exact"_a = r.exact,
                            "max_leakage"_a = r.max_leakage, "warnings"_a = w.messages);
        },
        "ion"_a, "spec"_a, "delta_omega_grid_hz"_a, "probe_duration_s"_a, "initial_nbar"_a, "theta_p"_a,
        "cutoff"_a = 40, "exact"_a = false, "threads"_a = 1);

    m.def(
        "sideband_cool",
        [](const IonSpec& ion, int cycles, double initial_nbar, int pulses_per_cycle, double recoil, int cutoff,
           std::size_t mode) {
            CoolingConfig cfg;
            cfg.cycles = cycles;
            cfg.initial_nbar = initial_nbar;
            cfg.pulses_per_cycle = pulses_per_cycle;
            cfg.recoil_heating_per_cycle = recoil;
            cfg.cutoff = cutoff;
            cfg.mode = mode;
            std::vector<double> nbar;
            for (const auto& r : sideband_cool(ion, cfg))
                nbar.push_back(r.nbar);
            return nbar;
        },
        "ion"_a, "cycles"_a, "initial_nbar"_a, "pulses_per_cycle"_a = 2, "recoil_heating_per_cycle"_a = 0.0,
        "cutoff"_a = 120, "mode"_a = 0, "Mean occupation after each cycle; entry 0 is the initial state.");

    // msgate
    py::class_<GateConfig>(m, "GateConfig")
        .def(py::init<>())
        .def_readwrite("eta", &GateConfig::eta)
        .def_readwrite("omega", &GateConfig::omega)
        .def_readwrite("delta", &GateConfig::delta)
        .def_readwrite("duration", &GateConfig::duration)
        .def_readwrite("trap_frequency", &GateConfig::trap_frequency)
        .def_readwrite("initial_nbar", &GateConfig::initial_nbar)
        .def_readwrite("period", &GateConfig::period)
        .def_readwrite("spin_phase", &GateConfig::spin_phase)
        .def_readwrite("cutoff", &GateConfig::cutoff)
        .def("problems", &GateConfig::problems);

    m.def(
        "gate_parameters",
        [](double eta, double omega) {
            const auto t = gate_parameters(eta, omega);
            return py::make_tuple(t.delta, t.gate_time);
        },
        "eta"_a, "omega"_a, "(delta in rad/s, gate time in s)");
    m.def("gate_pulses", &gate_pulses, "duration"_a, "period"_a);
    m.def("ground_spin_state", &ground_spin_state);
    m.def(
        "ms_evolve_analytic",
        [](const GateConfig& g, const Vector& psi) { return ms_evolve_analytic(g, psi).entries(); }, "config"_a,
        "initial_spin"_a = ground_spin_state());
    m.def(
        "ms_evolve_numeric",
        [](const GateConfig& g, const Vector& psi, int threads) {
            Warnings w;
            const auto r = ms_evolve_numeric(g, psi, &w, threads);
            return py::dict("rho"_a = r.rho.entries(), "pulses"_a = r.pulses, "max_leakage"_a = r.max_leakage,
                            "warnings"_a = w.messages);
        },
        "config"_a, "initial_spin"_a = ground_spin_state(), "threads"_a = 1);
    m.def(
        "bell_overlap",
        [](const Matrix& rho) {
            const auto b = bell_overlap(SpinDensityMatrix(rho));
            return py::make_tuple(b.fidelity, b.phase);
        },
        "rho"_a, "(fidelity, phase) of the best (|dd> + e^{i p}|uu>)/sqrt2");
    m.def("analysis_rotation", &analysis_rotation, "phi"_a);
    m.def(
        "parity", [](const Matrix& rho, double phi) { return parity(SpinDensityMatrix(rho), phi); }, "rho"_a,
        "phi"_a);
    m.def("uniform_phases", &uniform_phases, "points"_a);

    py::class_<DetectionError>(m, "DetectionError")
        .def(py::init([](double du, double ud) { return DetectionError{du, ud}; }), "down_to_up"_a = 0.0,
             "up_to_down"_a = 0.0)
        .def_readwrite("down_to_up", &DetectionError::down_to_up)
        .def_readwrite("up_to_down", &DetectionError::up_to_down);

    py::class_<ParityScan>(m, "ParityScan")
        .def_property_readonly("phi",
                               [](const ParityScan& s) {
                                   std::vector<double> v;
                                   for (const auto& p : s.rows)
                                       v.push_back(p.phi);
                                   return v;
                               })
        .def_property_readonly("parity",
                               [](const ParityScan& s) {
                                   std::vector<double> v;
                                   for (const auto& p : s.rows)
                                       v.push_back(p.parity);
                                   return v;
                               })
        .def_readonly("offset", &ParityScan::offset)
        .def_readonly("contrast", &ParityScan::contrast)
        .def_readonly("peak_to_peak", &ParityScan::peak_to_peak)
        .def_readonly("phase", &ParityScan::phase);

    m.def(
        "parity_scan",
        [](const Matrix& rho, std::vector<double> phis, const DetectionError& d) {
            return parity_scan(SpinDensityMatrix(rho), phis, d);
        },
        "rho"_a, "phis"_a, "detection"_a = DetectionError{});
    m.def(
        "fit_parity",
        [](const std::vector<double>& phi, const std::vector<double>& values) {
            if (phi.size() != values.size())
                throw InvalidParameter("phi and parity must have the same length");
            std::vector<ParityPoint> rows;
            for (std::size_t i = 0; i < phi.size(); ++i)
                rows.push_back({phi[i], values[i]});
            return fit_parity(std::move(rows));
        },
        "phi"_a, "parity"_a);

    py::class_<EntanglementReport>(m, "EntanglementReport")
        .def_readonly("down_down", &EntanglementReport::down_down)
        .def_readonly("up_up", &EntanglementReport::up_up)
        .def_readonly("contrast", &EntanglementReport::contrast)
        .def_readonly("peak_to_peak", &EntanglementReport::peak_to_peak)
        .def_readonly("fidelity", &EntanglementReport::fidelity)
        .def_readonly("fidelity_amplitude_reading", &EntanglementReport::fidelity_amplitude_reading)
        .def_readonly("entangled", &EntanglementReport::entangled)
        .def_readonly("phase", &EntanglementReport::phase)
        .def_readonly("adopted_reading", &EntanglementReport::adopted_reading);

    m.def(
        "fidelity_witness",
        [](const Matrix& rho, const ParityScan& scan, const DetectionError& d) {
            return fidelity_witness(measured_populations(SpinDensityMatrix(rho), d), scan);
        },
        "rho"_a, "scan"_a, "detection"_a = DetectionError{},
        "Witness from the measured populations of rho and a parity scan.");

    // configuration and runs; reports come back as JSON text
    m.def("preset_names", &preset_names);
    m.def("preset_text", &preset_text, "name"_a);
    m.def(
        "validate_config",
        [](const std::string& text) {
            const auto c = validate_config(text);
            return py::make_tuple(to_string(c.task), config_hash(c));
        },
        "text"_a, "Returns (task, config hash); raises SchemaError listing every problem.");
    m.def(
        "execute",
        [](const std::string& text, int threads, bool exact) {
            const auto c = validate_config(text);
            RunResult r;
            {
                py::gil_scoped_release release;
                r = execute(c, options(std::nullopt, std::nullopt, threads, exact));
            }
            return py::dict("columns"_a = r.table.columns, "rows"_a = cells(r.table),
                            "report_json"_a = r.report.dump(), "max_leakage"_a = r.max_leakage,
                            "warnings"_a = r.warnings.messages);
        },
        "text"_a, "threads"_a = 1, "exact"_a = false);
    m.def(
        "run",
        [](const std::string& text, std::optional<std::string> out, std::optional<std::string> format, int threads,
           bool exact) {
            const auto c = validate_config(text);
            const auto o = options(std::move(out), std::move(format), threads, exact);
            py::gil_scoped_release release;
            return run(c, o).to_json().dump();
        },
        "text"_a, "out"_a = py::none(), "format"_a = py::none(), "threads"_a = 1, "exact"_a = false,
        "Writes the output and its manifest; returns the manifest as JSON text.");
}
