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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "combtrap/comb.hpp"
#include "combtrap/dynamics.hpp"
#include "combtrap/errors.hpp"

namespace combtrap {

struct RabiRow {
    double time_s = 0.0;
    long pulses = 0;
    double p_up = 0.0;
};

struct RabiScanOptions {
    double tol_q = kDefaultQTolerance;
    double net_offset_hz = 0.0;  ///< nu1 - nu2; zero for a single beam
    int threads = 1;
};

/// Carrier flopping from |down>, by exact pulse-by-pulse propagation with the
/// motion decoupled. The per-pulse area comes from the closed-form Raman rate
/// whatever q is; what q controls is the phase each pulse lands with. When q
/// classifies as integer or half-integer the repetition rate is treated as
/// locked to that exact harmonic ratio.
std::vector<RabiRow> carrier_rabi_scan(const IonSpec& ion, const PulseTrainSpec& spec,
                                       std::span<const double> durations_s,
                                       const RabiScanOptions& options = {});

struct SpectrumScanConfig {
    std::vector<double> delta_omega_grid_hz;  ///< net comb offsets, ascending
    double probe_duration_s = 0.0;
    std::vector<TrapMode> modes;
    std::vector<double> initial_nbar;  ///< one per mode
    double theta_p = 0.0;
    int cutoff = 40;     ///< Fock cutoff per mode
    bool exact = false;  ///< exact propagator (single mode only)
    int threads = 1;

    std::vector<std::string> problems() const;
};

struct SpectrumRow {
    double delta_omega_hz = 0.0;
    double flip_probability = 0.0;
    /// Resonances within half a main-lobe width of this point, in
    /// (dn_mode0, dn_mode1, ...) notation, e.g. "(0,0)" or "(-1,0)".
    std::vector<std::string> branch_labels;
};

struct SpectrumResult {
    std::vector<SpectrumRow> rows;
    long pulses = 0;
    double theta_p = 0.0;
    std::vector<TrapMode> modes;
    bool exact = false;
    double max_leakage = 0.0;
};

/// Spin-flip probability against the net comb offset.
///
/// Analytic engine: for each initial Fock configuration the first-order
/// weight W = |A_c|^2 + sum_m (n_m |A_r,m|^2 + (n_m + 1) |A_b,m|^2) is mapped to
/// sin^2(sqrt W), which is exact for an isolated resonant line and equal to W
/// for weak drive, then thermally averaged.
SpectrumResult sideband_spectrum(const IonSpec& ion, const PulseTrainSpec& spec,
                                 const SpectrumScanConfig& cfg, Warnings* warnings = nullptr);

/// The same model at one offset.
double flip_probability(const IonSpec& ion, const PulseTrainSpec& spec,
                        const SpectrumScanConfig& cfg, double delta_omega_hz);

struct SidebandOffsets {
    double carrier_hz = 0.0;
    double red_hz = 0.0;
    double blue_hz = 0.0;
};

/// Net offsets solving (w0 + dw [-/+] w_t) T = 2 pi j for comb harmonic j.
SidebandOffsets sideband_offsets(const IonSpec& ion, const PulseTrainSpec& spec,
                                 const TrapMode& mode, long harmonic);

/// Comb harmonic closest to the qubit splitting.
long nearest_harmonic(const IonSpec& ion, const PulseTrainSpec& spec);

struct SidebandStrengths {
    double red = 0.0;
    double blue = 0.0;
};

/// Flip probability at the red and blue resonances of `cfg.modes[mode]`.
SidebandStrengths sideband_strengths(const IonSpec& ion, const PulseTrainSpec& spec,
                                     const SpectrumScanConfig& cfg, std::size_t mode = 0);

struct CoolingConfig {
    int cycles = 0;
    /// Red-sideband pulses per cycle. Pulse k (k = 0..P-1) has the pi-area of
    /// the n = P - k -> n - 1 transition, so the last one targets 1 -> 0.
    int pulses_per_cycle = 2;
    double initial_nbar = 0.0;
    double recoil_heating_per_cycle = 0.0;  ///< quanta added after each cycle
    int cutoff = 120;
    std::size_t mode = 0;

    std::vector<std::string> problems() const;
};

struct CoolingRow {
    int cycle = 0;
    double nbar = 0.0;
    double total_population = 1.0;
};

/// Rate model on the Fock diagonal. A red-sideband pulse with pi-area tuned
/// for level r moves population n -> n-1 with probability
/// sin^2(pi sqrt(n) / (2 sqrt(r))); the spin is then reset perfectly. Row 0 is
/// the initial state.
std::vector<CoolingRow> sideband_cool(const IonSpec& ion, const CoolingConfig& cfg,
                                      Warnings* warnings = nullptr);

/// First cycle with nbar <= target, or -1.
int cycles_to_reach(const std::vector<CoolingRow>& rows, double target);

/// nbar = r / (1 - r) with r = red / blue.
double thermometry_nbar(double red_strength, double blue_strength);

}  // namespace combtrap
