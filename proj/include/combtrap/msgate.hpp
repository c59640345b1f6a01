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

#include "combtrap/errors.hpp"
#include "combtrap/hilbert.hpp"

namespace combtrap {

/// Bichromatic two-ion drive, tones symmetrically detuned by `delta` from the
/// red and blue sidebands of a shared mode. Angular units throughout.
struct GateConfig {
    double eta = 0.0;
    double omega = 0.0;  ///< carrier Rabi rate of each tone
    double delta = 0.0;
    double duration = 0.0;
    double trap_frequency = 0.0;
    double initial_nbar = 0.0;
    double period = 0.0;
    double spin_phase = 0.0;  ///< phase of the spin-dependent force axis
    int cutoff = 20;          ///< Fock cutoff of the numeric propagator

    std::vector<std::string> problems() const;
    /// Throws on invalid input; warns when eta*omega is not small against
    /// the trap frequency.
    void check(Warnings* warnings = nullptr) const;
};

struct GateTiming {
    double delta = 0.0;      ///< rad/s
    double gate_time = 0.0;  ///< s
};

/// delta = 2 eta omega closes the phase-space loop with a maximally
/// entangling phase at t_g = 2 pi / delta.
GateTiming gate_parameters(double eta, double omega);

/// Number of picked pulses in `duration`.
long gate_pulses(double duration, double period);

/// |down down>.
Vector ground_spin_state();

/// Closed-form Molmer-Sorensen evolution in the interaction picture:
///   U(t) = D(alpha(t) J) exp(i Phi(t) J^2),
///   alpha(t) = (eta omega / delta)(1 - e^{i delta t}),
///   Phi(t)   = (eta omega / delta)^2 (delta t - sin delta t),
/// with J = (S_1 + S_2)/2 and S = i e^{i phi} sigma_+ + h.c., traced over a
/// thermal mode.
SpinDensityMatrix ms_evolve_analytic(const GateConfig& cfg, const Vector& initial_spin);

struct NumericGateResult {
    SpinDensityMatrix rho;
    long pulses = 0;
    double max_leakage = 0.0;
};

/// Pulse-by-pulse two-ion propagation with two tones on one beam, at
/// net offsets placing them delta inside the blue and red sidebands, followed
/// by a trace over the motion. Thermal initial motion is handled by averaging
/// Fock-state trajectories.
NumericGateResult ms_evolve_numeric(const GateConfig& cfg,
                                    const Vector& initial_spin = ground_spin_state(),
                                    Warnings* warnings = nullptr, int threads = 1);

/// Best overlap max_phi <chi_phi| rho |chi_phi> with
/// chi_phi = (|dd> + e^{i phi} |uu>)/sqrt 2.
struct BellOverlap {
    double fidelity = 0.0;
    double phase = 0.0;
};
BellOverlap bell_overlap(const SpinDensityMatrix& rho);

/// Analysis pulse R(phi) = exp[-i pi/4 (sigma_x cos phi + sigma_y sin phi)].
Matrix analysis_rotation(double phi);

/// Pi(phi) = Tr[sz sz R(phi)^{(x)2} rho R(phi)^dag{(x)2}].
double parity(const SpinDensityMatrix& rho, double phi);

/// Independent state-detection errors per ion.
struct DetectionError {
    double down_to_up = 0.0;
    double up_to_down = 0.0;
};

struct ParityPoint {
    double phi = 0.0;
    double parity = 0.0;
};

/// Least-squares fit Pi(phi) ~ offset + contrast cos(2 phi + phase).
struct ParityScan {
    std::vector<ParityPoint> rows;
    double offset = 0.0;
    double contrast = 0.0;      ///< oscillation amplitude, clamped to [0, 1]
    double peak_to_peak = 0.0;  ///< max - min of the fitted curve, 2 * contrast
    double phase = 0.0;         ///< in [0, 2 pi)
};

/// Fits a scan. Throws InsufficientScan unless the samples cover one period
/// (pi) of cos 2 phi: span plus mean spacing must reach pi.
ParityScan fit_parity(std::vector<ParityPoint> rows);

/// Samples Pi on `phis` (optionally through the detection channel) and fits.
ParityScan parity_scan(const SpinDensityMatrix& rho, std::span<const double> phis,
                       const DetectionError& detection = {}, int threads = 1);

/// `points` evenly spaced phases on [0, 2 pi).
std::vector<double> uniform_phases(int points);

struct Populations {
    double down_down = 0.0;
    double up_up = 0.0;
};

Populations measured_populations(const SpinDensityMatrix& rho, const DetectionError& detection = {});

/// Parity with detection errors: each ion's sigma_z reads as a sz + b with
/// a = 1 - e_du - e_ud and b = e_du - e_ud.
double measured_parity(const SpinDensityMatrix& rho, double phi, const DetectionError& detection);

struct EntanglementReport {
    double down_down = 0.0;
    double up_up = 0.0;
    double contrast = 0.0;      ///< fitted oscillation amplitude
    double peak_to_peak = 0.0;  ///< 2 * contrast
    /// (P_dd + P_uu)/2 + C/4 with C read as the peak-to-peak swing; the
    /// reading under which a perfect Bell state scores 1. Adopted.
    double fidelity = 0.0;
    /// The same formula with C read as the oscillation amplitude.
    double fidelity_amplitude_reading = 0.0;
    bool entangled = false;  ///< fidelity > 1/2
    double phase = 0.0;      ///< fitted phase offset of the parity scan
    std::string adopted_reading = "peak_to_peak";
};

EntanglementReport fidelity_witness(const Populations& populations, const ParityScan& scan);

}  // namespace combtrap
