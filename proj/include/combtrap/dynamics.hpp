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

#include <vector>

#include "combtrap/errors.hpp"
#include "combtrap/grating.hpp"
#include "combtrap/hilbert.hpp"

namespace combtrap {

/// One drive tone of the Raman beatnote. `delta_omega` (rad/s) is the tone's
/// comb offset measured from the reference offset already folded into
/// FrameConfig::omega_0_plus_dw, so a single on-frame tone has delta_omega 0.
struct Tone {
    double delta_omega = 0.0;
    double phase = 0.0;
    double weight = 1.0;
};

/// Instantaneous kick applied by every picked pulse.
struct KickConfig {
    double theta_p = 0.0;  ///< Bloch angle per pulse (all tones together)
    std::vector<Tone> tones{Tone{}};
    double eta = 0.0;      ///< Lamb-Dicke parameter; 0 decouples the motion
    double period = 0.0;   ///< seconds between picked pulses

    std::vector<std::string> problems() const;
    void check() const;

    /// sum_j w_j exp(i (delta_j t_n + phi_j)) at t_n = pulse_index * period.
    Complex tone_factor(long pulse_index) const;
};

/// Free Hamiltonian H0 = omega_t a^dag a + (omega_0 + Delta omega)/2 sum sigma_z.
struct FrameConfig {
    double omega_t = 0.0;
    double omega_0_plus_dw = 0.0;

    void check() const;
};

enum class Branch { carrier, red, blue };

std::string to_string(Branch b);

struct ResonanceAngle {
    double theta = 0.0;  ///< in [0, 2 pi)
    Branch branch = Branch::carrier;
};

/// (omega_0 + Delta omega + tone offset -/+ omega_t) T reduced to [0, 2 pi).
ResonanceAngle resonance_angle(const FrameConfig& frame, double tone_offset, double period,
                               Branch branch);

/// Kick of pulse `pulse_index` on the (2^m * cutoff)-dimensional space:
///   exp[-i theta_p/2 sum_ions (c_n sigma_+ D(i eta) + h.c.)],
/// c_n = tone_factor(pulse_index). Exact; with A = e^{i psi} sigma_+ D + h.c.
/// one has A^2 = 1, so the exponential is cos - i sin A.
Matrix kick_operator(const KickConfig& cfg, long pulse_index, const FockSpace& fock,
                     int num_qubits = 1);

/// Diagonal of exp(-i H0 T).
Vector free_evolution(const FrameConfig& frame, double period, const FockSpace& fock,
                      int num_qubits = 1);

struct Propagation {
    QuantumState state;
    double max_leakage = 0.0;  ///< largest top-two-level population seen
};

/// Applies (free evolution) * (kick) N times, kick of pulse n first, in the
/// frame of H0. Throws CutoffTooSmall if the leakage monitor exceeds
/// kLeakageLimit; with eta == 0 the motion is inert and not monitored.
Propagation propagate(const QuantumState& state, const KickConfig& cfg, const FrameConfig& frame,
                      long pulses);

/// V^N for a kick that does not change from pulse to pulse, by repeated
/// squaring. Only valid when every tone's delta_omega * period is a multiple
/// of 2 pi; throws InvalidParameter otherwise.
Matrix constant_kick_propagator(const KickConfig& cfg, const FrameConfig& frame,
                                const FockSpace& fock, long pulses, int num_qubits = 1);

/// Coefficients of sigma_+ (carrier), sigma_+ a (red) and sigma_+ a^dag (blue)
/// in -i theta_p/2 sum_{n<N} Q_n, with D(i eta e^{i w_t n T}) expanded to first
/// order in eta. Transition probabilities from |down, n> are |carrier|^2,
/// n |red|^2 and (n + 1) |blue|^2.
struct FirstOrderAmplitudes {
    Complex carrier;
    Complex red;
    Complex blue;
};

/// `mean_phonons` is only used for the Lamb-Dicke validity warning.
FirstOrderAmplitudes first_order_amplitudes(const KickConfig& cfg, const FrameConfig& frame,
                                            long pulses, Warnings* warnings = nullptr,
                                            double mean_phonons = 0.0);

/// (omega_t T eta)^-1: sidebands resolve once N is well above this.
double min_pulses_for_resolution(double omega_t, double period, double eta);

}  // namespace combtrap
