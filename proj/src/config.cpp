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

#include "combtrap/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <type_traits>

#include "combtrap/errors.hpp"

namespace combtrap {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& problems)
{
    std::string out = "configuration rejected:";
    for (const auto& p : problems)
        out += "\n  " + p;
    return out;
}

std::string child(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

// Collects every problem instead of stopping at the first.
class Reader {
public:
    std::vector<std::string> errors;
    // Unknown keys leave the parsed values intact; only these block the
    // physics checks.
    std::size_t bad_values = 0;

    void fail(const std::string& path, const std::string& msg)
    {
        errors.push_back(path + ": " + msg);
        ++bad_values;
    }

    void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
    {
        const std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& [key, value] : obj.items())
            if (!known.contains(key))
                errors.push_back(child(path, key) + ": unknown key");
    }

    const json* object(const json& parent, const std::string& path, const char* key, bool required)
    {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required)
                fail(child(path, key), "required section missing");
            return nullptr;
        }
        if (!it->is_object()) {
            fail(child(path, key), "expected an object");
            return nullptr;
        }
        return &*it;
    }

    bool number(const json& obj, const std::string& path, const char* key, double& out, bool required)
    {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(child(path, key), "required");
            return false;
        }
        if (!it->is_number() || !std::isfinite(it->get<double>())) {
            fail(child(path, key), "expected a finite number");
            return false;
        }
        out = it->get<double>();
        return true;
    }

    template <class Int>
    bool integer(const json& obj, const std::string& path, const char* key, Int& out, bool required)
    {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(child(path, key), "required");
            return false;
        }
        if (!it->is_number_integer()) {
            fail(child(path, key), "expected an integer");
            return false;
        }
        if constexpr (std::is_unsigned_v<Int>) {
            if (!it->is_number_unsigned()) {
                fail(child(path, key), "expected a non-negative integer");
                return false;
            }
        }
        out = it->get<Int>();
        return true;
    }

    bool boolean(const json& obj, const std::string& path, const char* key, bool& out)
    {
        const auto it = obj.find(key);
        if (it == obj.end())
            return false;
        if (!it->is_boolean()) {
            fail(child(path, key), "expected true or false");
            return false;
        }
        out = it->get<bool>();
        return true;
    }

    bool string(const json& obj, const std::string& path, const char* key, std::string& out, bool required)
    {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required)
                fail(child(path, key), "required");
            return false;
        }
        if (!it->is_string()) {
            fail(child(path, key), "expected a string");
            return false;
        }
        out = it->get<std::string>();
        return true;
    }

    void absorb(const std::string& section, const std::vector<std::string>& problems)
    {
        for (const auto& p : problems)
            errors.push_back(section + ": " + p);
    }
};

void read_modes(Reader& r, const json& ion, std::vector<TrapMode>& modes)
{
    const auto it = ion.find("modes");
    if (it == ion.end())
        return;
    if (!it->is_array()) {
        r.fail("ion.modes", "expected an array");
        return;
    }
    for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = "ion.modes[" + std::to_string(i) + "]";
        const json& m = (*it)[i];
        if (!m.is_object()) {
            r.fail(path, "expected an object");
            continue;
        }
        r.only_keys(m, path, {"trap_frequency_hz", "lamb_dicke"});
        TrapMode mode;
        r.number(m, path, "trap_frequency_hz", mode.trap_frequency_hz, true);
        r.number(m, path, "lamb_dicke", mode.lamb_dicke, true);
        modes.push_back(mode);
    }
}

void read_ion(Reader& r, const json& root, ExperimentConfig& c)
{
    const json* ion = r.object(root, "", "ion", true);
    if (!ion)
        return;
    r.only_keys(*ion, "ion",
                {"qubit_splitting_hz", "detuning_hz", "linewidth_hz", "saturation_intensity", "modes"});
    const std::size_t before = r.bad_values;
    r.number(*ion, "ion", "qubit_splitting_hz", c.ion.qubit_splitting_hz, true);
    r.number(*ion, "ion", "detuning_hz", c.ion.detuning_hz, true);
    r.number(*ion, "ion", "linewidth_hz", c.ion.linewidth_hz, true);
    r.number(*ion, "ion", "saturation_intensity", c.ion.saturation_intensity, true);
    read_modes(r, *ion, c.ion.modes);
    if (r.bad_values == before)
        r.absorb("ion", c.ion.problems());
}

void read_laser(Reader& r, const json& root, ExperimentConfig& c)
{
    const json* laser = r.object(root, "", "laser", true);
    if (!laser)
        return;
    r.only_keys(*laser, "laser",
                {"carrier_frequency_hz", "rep_rate_hz", "pulse_duration_s", "envelope", "pick_divisor",
                 "pulse_count", "intensity_ratio"});
    const std::size_t before = r.bad_values;
    r.number(*laser, "laser", "carrier_frequency_hz", c.laser.carrier_frequency_hz, true);
    r.number(*laser, "laser", "rep_rate_hz", c.laser.rep_rate_hz, true);
    r.number(*laser, "laser", "pulse_duration_s", c.laser.pulse_duration_s, true);
    r.number(*laser, "laser", "intensity_ratio", c.laser.intensity_ratio, true);
    r.integer(*laser, "laser", "pick_divisor", c.laser.pick_divisor, false);
    r.integer(*laser, "laser", "pulse_count", c.laser.pulse_count, false);
    std::string envelope;
    if (r.string(*laser, "laser", "envelope", envelope, false)) {
        try {
            c.laser.envelope = envelope_from_string(envelope);
        } catch (const Error&) {
            r.fail("laser.envelope", "expected \"sech\" or \"gaussian\"");
        }
    }
    if (r.bad_values == before)
        r.absorb("laser", c.laser.problems());
}

void read_beams(Reader& r, const json& root, ExperimentConfig& c)
{
    const json* beams = r.object(root, "", "beams", false);
    if (!beams)
        return;
    r.only_keys(*beams, "beams", {"ao1_offset_hz", "ao2_offset_hz", "tones_on_beam1"});
    const std::size_t before = r.bad_values;
    r.number(*beams, "beams", "ao1_offset_hz", c.beams.ao1_offset_hz, false);
    r.number(*beams, "beams", "ao2_offset_hz", c.beams.ao2_offset_hz, false);
    if (const auto it = beams->find("tones_on_beam1"); it != beams->end()) {
        if (!it->is_array()) {
            r.fail("beams.tones_on_beam1", "expected an array");
        } else {
            for (std::size_t i = 0; i < it->size(); ++i) {
                const std::string path = "beams.tones_on_beam1[" + std::to_string(i) + "]";
                const json& t = (*it)[i];
                if (!t.is_object()) {
                    r.fail(path, "expected an object");
                    continue;
                }
                r.only_keys(t, path, {"offset_hz", "amplitude_fraction"});
                BeamTone tone;
                r.number(t, path, "offset_hz", tone.offset_hz, true);
                r.number(t, path, "amplitude_fraction", tone.amplitude_fraction, true);
                c.beams.tones_on_beam1.push_back(tone);
            }
        }
    }
    if (r.bad_values == before)
        r.absorb("beams", c.beams.problems());
}

bool mode_index_ok(Reader& r, const ExperimentConfig& c, const std::string& path, int mode)
{
    if (mode < 0 || static_cast<std::size_t>(mode) >= c.ion.modes.size()) {
        r.fail(path, "no such entry in ion.modes");
        return false;
    }
    return true;
}

void read_rabi(Reader& r, const json& root, ExperimentConfig& c, bool required)
{
    const json* b = r.object(root, "", "rabi", required);
    if (!b)
        return;
    r.only_keys(*b, "rabi", {"max_duration_s", "points"});
    if (r.number(*b, "rabi", "max_duration_s", c.rabi.max_duration_s, true) && !(c.rabi.max_duration_s >= 0.0))
        r.fail("rabi.max_duration_s", "must be >= 0");
    if (r.integer(*b, "rabi", "points", c.rabi.points, true) && c.rabi.points < 1)
        r.fail("rabi.points", "must be >= 1");
}

void read_spectrum(Reader& r, const json& root, ExperimentConfig& c, bool required)
{
    const json* b = r.object(root, "", "spectrum", required);
    if (!b)
        return;
    auto& s = c.spectrum;
    r.only_keys(*b, "spectrum",
                {"start_hz", "stop_hz", "step_hz", "relative_to_carrier", "probe_duration_s", "initial_nbar",
                 "theta_p", "exact"});
    const bool have_start = r.number(*b, "spectrum", "start_hz", s.start_hz, true);
    const bool have_stop = r.number(*b, "spectrum", "stop_hz", s.stop_hz, true);
    if (r.number(*b, "spectrum", "step_hz", s.step_hz, true) && !(s.step_hz > 0.0))
        r.fail("spectrum.step_hz", "must be > 0");
    if (have_start && have_stop && !(s.stop_hz >= s.start_hz))
        r.fail("spectrum.stop_hz", "must be >= start_hz");
    if (have_start && have_stop && s.step_hz > 0.0 && (s.stop_hz - s.start_hz) / s.step_hz > 1e6)
        r.fail("spectrum.step_hz", "grid would exceed 10^6 points");
    r.boolean(*b, "spectrum", "relative_to_carrier", s.relative_to_carrier);
    if (r.number(*b, "spectrum", "probe_duration_s", s.probe_duration_s, true) && !(s.probe_duration_s > 0.0))
        r.fail("spectrum.probe_duration_s", "must be > 0");
    if (r.number(*b, "spectrum", "theta_p", s.theta_p, false) && !(s.theta_p >= 0.0))
        r.fail("spectrum.theta_p", "must be >= 0");
    r.boolean(*b, "spectrum", "exact", s.exact);

    const std::size_t modes = c.ion.modes.size();
    if (modes == 0)
        r.fail("ion.modes", "the spectrum task needs at least one mode");
    if (const auto it = b->find("initial_nbar"); it == b->end()) {
        r.fail("spectrum.initial_nbar", "required");
    } else if (it->is_number()) {
        s.initial_nbar.assign(modes, it->get<double>());
    } else if (it->is_array() && std::all_of(it->begin(), it->end(), [](const json& v) { return v.is_number(); })) {
        for (const auto& v : *it)
            s.initial_nbar.push_back(v.get<double>());
        if (s.initial_nbar.size() != modes)
            r.fail("spectrum.initial_nbar", "needs one entry per ion mode");
    } else {
        r.fail("spectrum.initial_nbar", "expected a number or an array of numbers");
    }
    for (double n : s.initial_nbar)
        if (!(n >= 0.0 && std::isfinite(n))) {
            r.fail("spectrum.initial_nbar", "entries must be finite and >= 0");
            break;
        }
}

void read_cool(Reader& r, const json& root, ExperimentConfig& c, bool required)
{
    const json* b = r.object(root, "", "cool", required);
    if (!b)
        return;
    auto& s = c.cool;
    r.only_keys(*b, "cool",
                {"cycles", "pulses_per_cycle", "initial_nbar", "recoil_heating_per_cycle", "mode", "target_nbar"});
    if (r.integer(*b, "cool", "cycles", s.cycles, true) && s.cycles < 0)
        r.fail("cool.cycles", "must be >= 0");
    if (r.integer(*b, "cool", "pulses_per_cycle", s.pulses_per_cycle, false) && s.pulses_per_cycle < 1)
        r.fail("cool.pulses_per_cycle", "must be >= 1");
    if (r.number(*b, "cool", "initial_nbar", s.initial_nbar, true) && !(s.initial_nbar >= 0.0))
        r.fail("cool.initial_nbar", "must be >= 0");
    if (r.number(*b, "cool", "recoil_heating_per_cycle", s.recoil_heating_per_cycle, false) &&
        !(s.recoil_heating_per_cycle >= 0.0))
        r.fail("cool.recoil_heating_per_cycle", "must be >= 0");
    if (r.number(*b, "cool", "target_nbar", s.target_nbar, false) && !(s.target_nbar >= 0.0))
        r.fail("cool.target_nbar", "must be >= 0");
    r.integer(*b, "cool", "mode", s.mode, false);
    mode_index_ok(r, c, "cool.mode", s.mode);
}

void read_gate(Reader& r, const json& root, ExperimentConfig& c, bool required)
{
    const json* b = r.object(root, "", "msgate", required);
    if (!b)
        return;
    auto& s = c.msgate;
    r.only_keys(*b, "msgate",
                {"gate_time_s", "duration_s", "initial_nbar", "mode", "spin_phase", "method", "points"});
    if (r.number(*b, "msgate", "gate_time_s", s.gate_time_s, true) && !(s.gate_time_s > 0.0))
        r.fail("msgate.gate_time_s", "must be > 0");
    if (r.number(*b, "msgate", "duration_s", s.duration_s, false) && !(s.duration_s >= 0.0))
        r.fail("msgate.duration_s", "must be >= 0");
    if (r.number(*b, "msgate", "initial_nbar", s.initial_nbar, false) && !(s.initial_nbar >= 0.0))
        r.fail("msgate.initial_nbar", "must be >= 0");
    r.number(*b, "msgate", "spin_phase", s.spin_phase, false);
    if (r.integer(*b, "msgate", "points", s.points, false) && s.points < 1)
        r.fail("msgate.points", "must be >= 1");
    std::string method;
    if (r.string(*b, "msgate", "method", method, false)) {
        if (method == "analytic")
            s.method = GateMethod::analytic;
        else if (method == "numeric")
            s.method = GateMethod::numeric;
        else
            r.fail("msgate.method", "expected \"analytic\" or \"numeric\"");
    }
    r.integer(*b, "msgate", "mode", s.mode, false);
    mode_index_ok(r, c, "msgate.mode", s.mode);
}

void read_parity(Reader& r, const json& root, ExperimentConfig& c, bool required)
{
    const json* b = r.object(root, "", "parity", required);
    if (!b)
        return;
    auto& s = c.parity;
    r.only_keys(*b, "parity", {"points", "detection_down_to_up", "detection_up_to_down", "shots"});
    if (r.integer(*b, "parity", "points", s.points, false) && s.points < 3)
        r.fail("parity.points", "must be >= 3");
    for (auto [key, field] : {std::pair{"detection_down_to_up", &s.detection_down_to_up},
                              std::pair{"detection_up_to_down", &s.detection_up_to_down}})
        if (r.number(*b, "parity", key, *field, false) && !(*field >= 0.0 && *field < 0.5))
            r.fail(child("parity", key), "must be in [0, 0.5)");
    if (r.integer(*b, "parity", "shots", s.shots, false) && s.shots < 0)
        r.fail("parity.shots", "must be >= 0");
}

void read_numerics(Reader& r, const json& root, ExperimentConfig& c)
{
    const json* b = r.object(root, "", "numerics", false);
    if (!b)
        return;
    r.only_keys(*b, "numerics", {"cutoff", "tol_q", "seed"});
    if (r.integer(*b, "numerics", "cutoff", c.numerics.cutoff, false) && c.numerics.cutoff < 2)
        r.fail("numerics.cutoff", "must be >= 2");
    if (r.number(*b, "numerics", "tol_q", c.numerics.tol_q, false) &&
        !(c.numerics.tol_q > 0.0 && c.numerics.tol_q < 0.25))
        r.fail("numerics.tol_q", "must be in (0, 0.25)");
    r.integer(*b, "numerics", "seed", c.numerics.seed, false);
}

void read_output(Reader& r, const json& root, ExperimentConfig& c)
{
    const json* b = r.object(root, "", "output", false);
    if (!b)
        return;
    r.only_keys(*b, "output", {"path", "format"});
    if (r.string(*b, "output", "path", c.output.path, false) && c.output.path.empty())
        r.fail("output.path", "must not be empty");
    std::string format;
    if (r.string(*b, "output", "format", format, false)) {
        if (format == "csv")
            c.output.format = OutputFormat::csv;
        else if (format == "json")
            c.output.format = OutputFormat::json;
        else
            r.fail("output.format", "expected \"csv\" or \"json\"");
    }
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> problems)
    : Error(join(problems)), problems_(std::move(problems))
{
}

std::string to_string(Task t)
{
    switch (t) {
    case Task::rabi: return "rabi";
    case Task::spectrum: return "spectrum";
    case Task::cool: return "cool";
    case Task::msgate: return "msgate";
    case Task::parity: return "parity";
    }
    return "unknown";
}

std::string to_string(OutputFormat f)
{
    return f == OutputFormat::csv ? "csv" : "json";
}

int ExperimentConfig::cutoff() const
{
    if (numerics.cutoff > 0)
        return numerics.cutoff;
    switch (task) {
    case Task::rabi: return 2;
    case Task::spectrum: return 40;
    case Task::cool: return 120;
    case Task::msgate:
    case Task::parity: return 20;
    }
    return 20;
}

ExperimentConfig validate_config(std::string_view text)
{
    json tree;
    try {
        tree = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError({std::string("<root>: not valid JSON: ") + e.what()});
    }
    return validate_tree(tree);
}

ExperimentConfig validate_tree(const json& tree)
{
    if (!tree.is_object())
        throw SchemaError({"<root>: expected an object"});
    Reader r;
    ExperimentConfig c;
    r.only_keys(tree, "",
                {"task", "ion", "laser", "beams", "rabi", "spectrum", "cool", "msgate", "parity", "numerics",
                 "output"});

    std::string task;
    bool task_known = false;
    if (r.string(tree, "", "task", task, true)) {
        task_known = true;
        if (task == "rabi")
            c.task = Task::rabi;
        else if (task == "spectrum")
            c.task = Task::spectrum;
        else if (task == "cool")
            c.task = Task::cool;
        else if (task == "msgate")
            c.task = Task::msgate;
        else if (task == "parity")
            c.task = Task::parity;
        else {
            r.fail("task", "expected one of rabi, spectrum, cool, msgate, parity");
            task_known = false;
        }
    }

    read_ion(r, tree, c);
    read_laser(r, tree, c);
    read_beams(r, tree, c);
    read_numerics(r, tree, c);
    read_output(r, tree, c);

    // Task blocks are validated whenever present; the selected task's are required.
    const auto needs = [&](Task t) { return task_known && c.task == t; };
    read_rabi(r, tree, c, needs(Task::rabi));
    if (tree.contains("spectrum") || needs(Task::spectrum))
        read_spectrum(r, tree, c, needs(Task::spectrum));
    if (tree.contains("cool") || needs(Task::cool))
        read_cool(r, tree, c, needs(Task::cool));
    if (tree.contains("msgate") || needs(Task::msgate) || needs(Task::parity))
        read_gate(r, tree, c, needs(Task::msgate) || needs(Task::parity));
    read_parity(r, tree, c, false);

    if (!r.errors.empty())
        throw SchemaError(std::move(r.errors));
    c.source = tree;
    return c;
}

}  // namespace combtrap
