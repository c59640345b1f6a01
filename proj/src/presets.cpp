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

#include <map>

#include "combtrap/errors.hpp"

namespace combtrap {

namespace {

// Shared blocks: 12.6428 GHz hyperfine qubit, 355 nm mode-locked laser at
// 80.78 MHz with 1 ps pulses, 9 THz detuning, 1.64 MHz trap, eta = 0.1.
std::string ion(const std::string& modes)
{
    return R"("ion": {"qubit_splitting_hz": 12642800000, "detuning_hz": 9e12, "linewidth_hz": 19.6e6,
        "saturation_intensity": 0.15, "modes": )" + modes + "}";
}

std::string laser(int pick)
{
    return R"("laser": {"carrier_frequency_hz": 8.444858e14, "rep_rate_hz": 80.78e6, "pulse_duration_s": 1e-12,
          "envelope": "sech", "pick_divisor": )" + std::to_string(pick) + R"(, "intensity_ratio": 3333.3})";
}

const std::string x_mode = R"([{"trap_frequency_hz": 1.64e6, "lamb_dicke": 0.1}])";
// The y mode frequency is illustrative.
const std::string xy_modes = R"([{"trap_frequency_hz": 1.64e6, "lamb_dicke": 0.1},
                   {"trap_frequency_hz": 1.90e6, "lamb_dicke": 0.1}])";

std::string preset(const std::string& task, const std::string& modes, int pick, const std::string& rest)
{
    return "{\n\"task\": \"" + task + "\",\n" + ion(modes) + ",\n" + laser(pick) + ",\n" + rest + "}\n";
}

const std::map<std::string, std::string>& presets()
{
    static const std::map<std::string, std::string> table = {
        {"fig3_integer_q", preset("rabi", x_mode, 2, R"("rabi": {"max_duration_s": 40e-6, "points": 201},
"output": {"path": "fig3_integer_q.csv", "format": "csv"}
)")},
        {"fig3_half_q", preset("rabi", x_mode, 3, R"("rabi": {"max_duration_s": 40e-6, "points": 201},
"output": {"path": "fig3_half_q.csv", "format": "csv"}
)")},
        {"fig4a_spectrum", preset("spectrum", xy_modes, 1, R"("spectrum": {"start_hz": -2.5e6, "stop_hz": 2.5e6, "step_hz": 2e3, "relative_to_carrier": true,
             "probe_duration_s": 80e-6, "initial_nbar": [6, 6], "theta_p": 4.86e-4},
"numerics": {"cutoff": 80},
"output": {"path": "fig4a_spectrum.csv", "format": "csv"}
)")},
        {"fig4b_cooling", preset("cool", xy_modes, 1, R"("cool": {"cycles": 60, "pulses_per_cycle": 4, "initial_nbar": 10, "mode": 0, "target_nbar": 0.03},
"numerics": {"cutoff": 120},
"output": {"path": "fig4b_cooling.csv", "format": "csv"}
)")},
        {"fig5_parity", preset("parity", x_mode, 1, R"("msgate": {"gate_time_s": 108e-6, "initial_nbar": 0, "mode": 0, "method": "numeric", "points": 1},
"parity": {"points": 36},
"numerics": {"cutoff": 20},
"output": {"path": "fig5_parity.csv", "format": "csv"}
)")},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const auto& [name, text] : presets())
        out.push_back(name);
    return out;
}

std::string preset_text(const std::string& name)
{
    const auto it = presets().find(name);
    if (it == presets().end())
        throw InvalidParameter("unknown preset '" + name + "'");
    return it->second;
}

}  // namespace combtrap
