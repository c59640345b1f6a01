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

#include "combtrap/runner.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <random>

#include "combtrap/msgate.hpp"
#include "combtrap/spectroscopy.hpp"
#include "combtrap/units.hpp"

#ifndef COMBTRAP_VERSION
#define COMBTRAP_VERSION "0.0.0"
#endif

namespace combtrap {

using nlohmann::json;

namespace {

std::vector<double> linear_grid(double start, double stop, double step)
{
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (long k = 0; k < count; ++k)
        out[k] = start + static_cast<double>(k) * step;
    return out;
}

std::vector<double> sample_times(double duration, int points)
{
    if (points == 1)
        return {duration};
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k)
        out[k] = duration * k / (points - 1);
    return out;
}

RunResult run_rabi(const ExperimentConfig& c, const RunOptions& o)
{
    RunResult r;
    const auto times = sample_times(c.rabi.max_duration_s, c.rabi.points);
    RabiScanOptions opts;
    opts.tol_q = c.numerics.tol_q;
    opts.net_offset_hz = c.beams.net_offset_hz();
    opts.threads = o.threads;
    const auto rows = carrier_rabi_scan(c.ion, c.laser, times, opts);

    r.table.columns = {"time_s", "pulses", "p_up"};
    for (const auto& row : rows)
        r.table.rows.push_back({row.time_s, row.pulses, row.p_up});

    const QParameter q = q_parameter(c.ion, c.laser, c.numerics.tol_q);
    const RamanCoupling coupling = raman_coupling(c.ion, c.laser);
    r.report = {{"q", q.value},
                {"q_class", to_string(q.resonance)},
                {"q_nearest", q.nearest},
                {"effective_rep_rate_hz", effective_rep_rate(c.laser)},
                {"rabi_frequency_hz", to_hertz(coupling.omega)},
                {"suppression", coupling.suppression},
                {"theta_p", pulse_area(coupling.omega, effective_period(c.laser))}};
    if (q.resonance != Resonance::integer)
        r.warnings.add("q = " + format_double(q.value) + " is not integer: the comb cannot drive the carrier");
    return r;
}

RunResult run_spectrum(const ExperimentConfig& c, const RunOptions& o)
{
    RunResult r;
    const auto& s = c.spectrum;
    const long harmonic = nearest_harmonic(c.ion, c.laser);
    const double carrier = sideband_offsets(c.ion, c.laser, c.ion.modes.front(), harmonic).carrier_hz;
    const double shift = s.relative_to_carrier ? carrier : 0.0;

    SpectrumScanConfig cfg;
    for (double d : linear_grid(s.start_hz, s.stop_hz, s.step_hz))
        cfg.delta_omega_grid_hz.push_back(d + shift);
    cfg.probe_duration_s = s.probe_duration_s;
    cfg.modes = c.ion.modes;
    cfg.initial_nbar = s.initial_nbar;
    cfg.theta_p = s.theta_p >= 0.0 ? s.theta_p
                                   : pulse_area(raman_coupling(c.ion, c.laser).omega, effective_period(c.laser));
    cfg.cutoff = c.cutoff();
    cfg.exact = s.exact || o.force_exact;
    cfg.threads = o.threads;

    const SpectrumResult result = sideband_spectrum(c.ion, c.laser, cfg, &r.warnings);
    r.max_leakage = result.max_leakage;
    r.table.columns = {"delta_omega_hz", "from_carrier_hz", "p_flip", "branch"};
    for (const auto& row : result.rows) {
        std::string branch;
        for (const auto& label : row.branch_labels)
            branch += (branch.empty() ? "" : ";") + label;
        r.table.rows.push_back({row.delta_omega_hz, row.delta_omega_hz - carrier, row.flip_probability, branch});
    }

    json lines = json::array();
    for (const auto& mode : c.ion.modes) {
        const auto off = sideband_offsets(c.ion, c.laser, mode, harmonic);
        lines.push_back({{"trap_frequency_hz", mode.trap_frequency_hz},
                         {"carrier_hz", off.carrier_hz},
                         {"red_hz", off.red_hz},
                         {"blue_hz", off.blue_hz}});
    }
    r.report = {{"pulses", result.pulses},
                {"theta_p", result.theta_p},
                {"exact", result.exact},
                {"harmonic", harmonic},
                {"lines", lines}};
    return r;
}

RunResult run_cool(const ExperimentConfig& c)
{
    RunResult r;
    CoolingConfig cfg;
    cfg.cycles = c.cool.cycles;
    cfg.pulses_per_cycle = c.cool.pulses_per_cycle;
    cfg.initial_nbar = c.cool.initial_nbar;
    cfg.recoil_heating_per_cycle = c.cool.recoil_heating_per_cycle;
    cfg.cutoff = c.cutoff();
    cfg.mode = static_cast<std::size_t>(c.cool.mode);

    const auto rows = sideband_cool(c.ion, cfg, &r.warnings);
    r.table.columns = {"cycle", "nbar", "total_population"};
    for (const auto& row : rows)
        r.table.rows.push_back({static_cast<long>(row.cycle), row.nbar, row.total_population});

    const int reached = cycles_to_reach(rows, c.cool.target_nbar);
    r.report = {{"target_nbar", c.cool.target_nbar},
                {"cycles_to_target", reached < 0 ? json(nullptr) : json(reached)},
                {"final_nbar", rows.back().nbar}};
    if (reached < 0)
        r.warnings.add("target n-bar " + format_double(c.cool.target_nbar) + " not reached within " +
                       std::to_string(c.cool.cycles) + " cycles");
    return r;
}

GateConfig gate_config(const ExperimentConfig& c)
{
    const TrapMode& mode = c.ion.modes.at(static_cast<std::size_t>(c.msgate.mode));
    GateConfig g;
    g.eta = mode.lamb_dicke;
    // t_g = 2 pi / (2 eta Omega)
    g.omega = M_PI / (g.eta * c.msgate.gate_time_s);
    g.delta = 2.0 * g.eta * g.omega;
    g.duration = c.msgate.duration_s >= 0.0 ? c.msgate.duration_s : c.msgate.gate_time_s;
    g.trap_frequency = to_angular(mode.trap_frequency_hz);
    g.initial_nbar = c.msgate.initial_nbar;
    g.period = effective_period(c.laser);
    g.spin_phase = c.msgate.spin_phase;
    g.cutoff = c.cutoff();
    return g;
}

struct GateOutcome {
    SpinDensityMatrix rho;
    long pulses;
    double leakage;
};

GateOutcome evolve_gate(const ExperimentConfig& c, GateConfig g, double duration, const RunOptions& o,
                        Warnings* warnings)
{
    g.duration = duration;
    if (c.msgate.method == GateMethod::numeric) {
        auto out = ms_evolve_numeric(g, ground_spin_state(), warnings, o.threads);
        return {std::move(out.rho), out.pulses, out.max_leakage};
    }
    return {ms_evolve_analytic(g, ground_spin_state()), gate_pulses(duration, g.period), 0.0};
}

json gate_report(const ExperimentConfig& c, const GateConfig& g)
{
    return {{"method", c.msgate.method == GateMethod::numeric ? "numeric" : "analytic"},
            {"rabi_frequency_hz", to_hertz(g.omega)},
            {"detuning_hz", to_hertz(g.delta)},
            {"gate_time_s", c.msgate.gate_time_s},
            {"gate_pulses", gate_pulses(c.msgate.gate_time_s, g.period)},
            {"duration_s", g.duration},
            {"theta_p", 2.0 * g.omega * g.period}};
}

RunResult run_msgate(const ExperimentConfig& c, const RunOptions& o)
{
    RunResult r;
    const GateConfig g = gate_config(c);
    g.check(&r.warnings);
    r.table.columns = {"time_s", "pulses", "p_dd", "p_uu", "bell_fidelity"};
    std::optional<GateOutcome> last;
    for (double t : sample_times(g.duration, c.msgate.points)) {
        last = evolve_gate(c, g, t, o, nullptr);
        r.max_leakage = std::max(r.max_leakage, last->leakage);
        r.table.rows.push_back(
            {t, last->pulses, last->rho.population(0), last->rho.population(3), bell_overlap(last->rho).fidelity});
    }
    const BellOverlap overlap = bell_overlap(last->rho);
    r.report = gate_report(c, g);
    r.report["bell_fidelity"] = overlap.fidelity;
    r.report["bell_phase"] = overlap.phase;
    r.report["purity"] = last->rho.purity();
    return r;
}

RunResult run_parity(const ExperimentConfig& c, const RunOptions& o)
{
    RunResult r;
    const GateConfig g = gate_config(c);
    g.check(&r.warnings);
    const GateOutcome gate = evolve_gate(c, g, g.duration, o, nullptr);
    r.max_leakage = gate.leakage;

    const DetectionError detection{c.parity.detection_down_to_up, c.parity.detection_up_to_down};
    const auto phis = uniform_phases(c.parity.points);
    ParityScan scan = parity_scan(gate.rho, phis, detection, o.threads);
    if (c.parity.shots > 0) {
        // Projection noise: each shot reads parity +1 with probability (1 + Pi)/2.
        std::mt19937_64 rng(c.numerics.seed);
        auto rows = scan.rows;
        for (auto& row : rows) {
            const double p = std::clamp((1.0 + row.parity) / 2.0, 0.0, 1.0);
            std::binomial_distribution<long> draw(c.parity.shots, p);
            row.parity = 2.0 * static_cast<double>(draw(rng)) / static_cast<double>(c.parity.shots) - 1.0;
        }
        scan = fit_parity(std::move(rows));
    }

    r.table.columns = {"phi", "parity"};
    for (const auto& row : scan.rows)
        r.table.rows.push_back({row.phi, row.parity});

    const Populations pops = measured_populations(gate.rho, detection);
    const EntanglementReport w = fidelity_witness(pops, scan);
    r.report = gate_report(c, g);
    r.report["populations"] = {{"down_down", w.down_down}, {"up_up", w.up_up}};
    r.report["parity_offset"] = scan.offset;
    r.report["contrast"] = w.contrast;
    r.report["peak_to_peak"] = w.peak_to_peak;
    r.report["fidelity"] = w.fidelity;
    r.report["fidelity_amplitude_reading"] = w.fidelity_amplitude_reading;
    r.report["adopted_reading"] = w.adopted_reading;
    r.report["entangled"] = w.entangled;
    r.report["parity_phase"] = w.phase;
    r.report["bell_overlap_fidelity"] = bell_overlap(gate.rho).fidelity;
    return r;
}

std::string timestamp_utc()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

json cell_json(const Cell& cell)
{
    return std::visit([](const auto& v) { return json(v); }, cell);
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw Error("failed writing '" + path + "'");
}

std::string with_extension(const std::string& path, const std::string& ext)
{
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return path.substr(0, dot) + ext;
    return path + ext;
}

}  // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string manifest_path(const std::string& output_path)
{
    return output_path + ".manifest.json";
}

std::string config_hash(const ExperimentConfig& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config.source.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json RunManifest::to_json() const
{
    json j = {{"config_hash", config_hash},
              {"version", version},
              {"timestamp", timestamp},
              {"task", task},
              {"output", output_path},
              {"status", status},
              {"max_leakage", max_leakage},
              {"warnings", warnings},
              {"wall_time_s", wall_time_s},
              {"report", report}};
    if (!error.empty())
        j["error"] = error;
    return j;
}

RunResult execute(const ExperimentConfig& config, const RunOptions& options)
{
    switch (config.task) {
    case Task::rabi: return run_rabi(config, options);
    case Task::spectrum: return run_spectrum(config, options);
    case Task::cool: return run_cool(config);
    case Task::msgate: return run_msgate(config, options);
    case Task::parity: return run_parity(config, options);
    }
    throw InvalidParameter("unknown task");
}

std::string to_csv(const Table& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + csv_field(table.columns[i]);
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            if (const auto* d = std::get_if<double>(&row[i]))
                out += format_double(*d);
            else if (const auto* l = std::get_if<long>(&row[i]))
                out += std::to_string(*l);
            else
                out += csv_field(std::get<std::string>(row[i]));
        }
        out += '\n';
    }
    return out;
}

std::string to_json_document(const Table& table, const RunResult& result, const std::string& hash)
{
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i)
            r[table.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(r));
    }
    json doc = {{"columns", table.columns},
                {"rows", rows},
                {"report", result.report},
                {"manifest",
                 {{"config_hash", hash},
                  {"version", COMBTRAP_VERSION},
                  {"max_leakage", result.max_leakage},
                  {"warnings", result.warnings.messages}}}};
    return doc.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& config, const RunOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const OutputFormat format = options.format.value_or(config.output.format);
    std::string path = options.out.value_or(config.output.path);
    if (!options.out && options.format && format != config.output.format)
        path = with_extension(path, format == OutputFormat::csv ? ".csv" : ".json");

    ExperimentConfig effective = config;
    if (options.force_exact && config.task == Task::spectrum)
        effective.source["spectrum"]["exact"] = true;

    RunManifest m;
    m.config_hash = config_hash(effective);
    m.version = COMBTRAP_VERSION;
    m.timestamp = timestamp_utc();
    m.task = to_string(config.task);
    m.output_path = path;
    const auto finish = [&] {
        m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_file(manifest_path(path), m.to_json().dump(2) + "\n");
    };

    try {
        RunResult result = execute(config, options);
        m.max_leakage = result.max_leakage;
        write_file(path, format == OutputFormat::csv ? to_csv(result.table)
                                                     : to_json_document(result.table, result, m.config_hash));
        m.warnings = result.warnings.messages;
        m.report = result.report;
        finish();
        return m;
    } catch (const CutoffTooSmall& e) {
        m.status = "failed";
        m.error = std::string("CutoffTooSmall: ") + e.what();
        m.max_leakage = e.leakage();
        finish();
        throw;
    } catch (const std::exception& e) {
        m.status = "failed";
        m.error = e.what();
        finish();
        throw;
    }
}

}  // namespace combtrap
