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

// Experiment configuration: a JSON tree validated against a fixed schema.
// Key names carry their units (_hz, _s); every frequency is in Hz (not
// angular) and every time in seconds.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "combtrap/comb.hpp"
#include "combtrap/msgate.hpp"
#include "combtrap/spectroscopy.hpp"

namespace combtrap {

enum class Task { rabi, spectrum, cool, msgate, parity };
enum class OutputFormat { csv, json };

std::string to_string(Task t);
std::string to_string(OutputFormat f);

struct RabiTask {
    double max_duration_s = 0.0;
    int points = 0;  ///< durations 0 .. max_duration_s inclusive
};

struct SpectrumTask {
    double start_hz = 0.0;  ///< grid of delta_omega / 2 pi
    double stop_hz = 0.0;
    double step_hz = 0.0;
    /// When set, start/stop are offsets from the carrier line of the
    /// nearest comb harmonic; output columns stay absolute.
    bool relative_to_carrier = false;
    double probe_duration_s = 0.0;
    std::vector<double> initial_nbar;  ///< one per ion mode
    double theta_p = -1.0;             ///< < 0: derive from the laser
    bool exact = false;
};

struct CoolTask {
    int cycles = 0;
    int pulses_per_cycle = 2;
    double initial_nbar = 0.0;
    double recoil_heating_per_cycle = 0.0;
    int mode = 0;
    double target_nbar = 0.03;
};

enum class GateMethod { analytic, numeric };

struct GateTask {
    double gate_time_s = 0.0;
    double duration_s = -1.0;  ///< < 0: one gate time
    double initial_nbar = 0.0;
    int mode = 0;
    double spin_phase = 0.0;
    GateMethod method = GateMethod::analytic;
    int points = 11;  ///< trace samples from 0 to duration_s
};

struct ParityTask {
    int points = 24;
    double detection_down_to_up = 0.0;
    double detection_up_to_down = 0.0;
    long shots = 0;  ///< 0: exact expectation values; > 0: sampled with numerics.seed
};

struct Numerics {
    int cutoff = 0;  ///< 0: task default
    double tol_q = kDefaultQTolerance;
    std::uint64_t seed = 0;
};

struct OutputSpec {
    std::string path = "combtrap_out.csv";
    OutputFormat format = OutputFormat::csv;
};

struct ExperimentConfig {
    Task task = Task::rabi;
    IonSpec ion;
    PulseTrainSpec laser;
    BeamGeometry beams;
    RabiTask rabi;
    SpectrumTask spectrum;
    CoolTask cool;
    GateTask msgate;
    ParityTask parity;
    Numerics numerics;
    OutputSpec output;
    nlohmann::json source;  ///< the validated tree, for hashing and echoing

    int cutoff() const;  ///< numerics.cutoff or the task default
};

/// Parses and validates. Throws SchemaError listing every problem found,
/// each prefixed with its field path.
ExperimentConfig validate_config(std::string_view text);
ExperimentConfig validate_tree(const nlohmann::json& tree);

/// Bundled example configurations.
std::vector<std::string> preset_names();
/// Throws InvalidParameter for an unknown name.
std::string preset_text(const std::string& name);

}  // namespace combtrap
