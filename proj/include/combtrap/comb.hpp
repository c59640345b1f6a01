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

#include <complex>
#include <string>
#include <vector>

namespace combtrap {

enum class Envelope { sech, gaussian };

std::string to_string(Envelope e);
Envelope envelope_from_string(const std::string& name);

/// Mode-locked pulse train as seen by the ion.
///
/// The single-pulse field is f(t) = sqrt(pi/2) E0 sech(pi t / tau) for the
/// sech envelope. The gaussian option uses
/// f(t) = sqrt(pi/2) E0 exp(-pi^2 t^2 / (2 tau^2)), which has the same
/// curvature at the peak. E0 is absorbed into `intensity_ratio`.
struct PulseTrainSpec {
    double carrier_frequency_hz = 0.0;
    double rep_rate_hz = 0.0;
    double pulse_duration_s = 0.0;
    Envelope envelope = Envelope::sech;
    int pick_divisor = 1;
    long pulse_count = 0;
    double intensity_ratio = 0.0;  ///< s = I_avg / I_sat

    /// Human-readable invariant violations, empty when valid.
    std::vector<std::string> problems() const;
    /// Throws InvalidParameter listing every problem.
    void check() const;
};

struct TrapMode {
    double trap_frequency_hz = 0.0;
    double lamb_dicke = 0.0;
};

struct IonSpec {
    double qubit_splitting_hz = 0.0;
    double detuning_hz = 0.0;  ///< single-photon detuning from the excited state
    double linewidth_hz = 0.0;
    double saturation_intensity = 0.0;  ///< W/cm^2
    std::vector<TrapMode> modes;

    std::vector<std::string> problems() const;
    void check() const;
};

struct BeamTone {
    double offset_hz = 0.0;
    double amplitude_fraction = 1.0;
};

/// Two crossed beams, each passing an AO frequency shifter. Beam 1 may carry
/// several drive tones (several combs in one beam).
struct BeamGeometry {
    double ao1_offset_hz = 0.0;
    double ao2_offset_hz = 0.0;
    std::vector<BeamTone> tones_on_beam1;

    /// Net comb offset (nu1 - nu2) in Hz. Sign convention: positive when
    /// beam 1 is upshifted relative to beam 2.
    double net_offset_hz() const { return ao1_offset_hz - ao2_offset_hz; }

    /// Per-tone net offsets (Hz) with their amplitude fractions. Without
    /// explicit tones this is the single pair {net_offset_hz(), 1}.
    std::vector<BeamTone> net_tones() const;

    std::vector<std::string> problems() const;
    void check() const;
};

double effective_rep_rate(const PulseTrainSpec& spec);

/// Period between picked pulses, 1 / effective_rep_rate.
double effective_period(const PulseTrainSpec& spec);

enum class Resonance { integer, half_integer, off_resonant };

std::string to_string(Resonance r);

struct QParameter {
    double value = 0.0;    ///< qubit splitting / effective comb spacing
    Resonance resonance = Resonance::off_resonant;
    double nearest = 0.0;  ///< closest integer or half-integer
};

inline constexpr double kDefaultQTolerance = 1e-3;

/// Ratio of the qubit splitting to the comb spacing, classified against the
/// integer and half-integer lattices. `tol_q` is a fractional tolerance: the
/// value is resonant when |q - nearest| <= tol_q * q.
QParameter q_parameter(const IonSpec& ion, const PulseTrainSpec& spec,
                       double tol_q = kDefaultQTolerance);

/// Fourier transform of the single-pulse envelope (E0 = 1) at angular
/// frequency offset `omega` from the carrier.
double envelope_spectrum(const PulseTrainSpec& spec, double omega);

/// E_k = nu_R f~(2 pi k nu_R) for the picked comb (relative units).
std::complex<double> comb_tooth_amplitude(const PulseTrainSpec& spec, long tooth_index);

/// Spectrum of a finite train of `pulses` pulses at angular offset `omega`
/// from the carrier: f~(omega) * sum_{n=1..N} exp(-i omega n T).
std::complex<double> train_spectrum(const PulseTrainSpec& spec, double omega, long pulses);

/// Sum over teeth of E_l E_{l-q}, restricted to teeth within +-5/tau of the
/// carrier. `tooth_offset` shifts every tooth frequency by that fraction of
/// the comb spacing (a carrier-envelope offset).
double tooth_correlation(const PulseTrainSpec& spec, long q, double tooth_offset = 0.0);

/// Closed-form suppression of the Raman rate by the finite pulse bandwidth.
/// For the sech envelope this is x / (e^{x/2} - e^{-x/2}) with x = w0 tau.
double suppression_factor(double omega0_tau, Envelope envelope = Envelope::sech);

struct RamanCoupling {
    double omega = 0.0;       ///< rad/s, closed form
    double omega0 = 0.0;      ///< rad/s, time-averaged s gamma^2 / 2 Delta
    double suppression = 1.0;
    double omega_tooth_sum = 0.0;  ///< rad/s, discrete tooth sum normalized to omega0
    long q_teeth = 0;              ///< tooth separation used by the sum
};

/// Raman Rabi frequency with no resonance check. The tooth sum uses the
/// nearest integer tooth separation.
RamanCoupling raman_coupling(const IonSpec& ion, const PulseTrainSpec& spec);

/// Resonant Rabi frequency of comb-driven Raman transitions. Throws
/// NotOnResonance unless q is integer-classified.
RamanCoupling raman_rabi_frequency(const IonSpec& ion, const PulseTrainSpec& spec,
                                   double tol_q = kDefaultQTolerance);

/// Bloch angle per pulse, theta_p = Omega T.
double pulse_area(double omega, double period);
double pulse_area(const IonSpec& ion, const PulseTrainSpec& spec,
                  double tol_q = kDefaultQTolerance);

}  // namespace combtrap
