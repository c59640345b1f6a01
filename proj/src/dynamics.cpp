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

#include "combtrap/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "combtrap/units.hpp"

namespace combtrap {

namespace {

double wrap_angle(double x)
{
    return std::remainder(x, kTwoPi);
}

// Applies the kick of one ion in place; see kick_operator for the closed form.
void apply_ion_kick(Vector& psi, int ion, int num_qubits, int cutoff, double cos_t,
                    Complex minus_i_sin_e, const Matrix* disp, const Matrix* disp_dag)
{
    const int mask = 1 << (num_qubits - 1 - ion);
    const Complex minus_i_sin_conj = -std::conj(minus_i_sin_e);  // -i sin e^{-i psi}
    for (int s = 0; s < (1 << num_qubits); ++s) {
        if (s & mask)
            continue;
        auto down = psi.segment(s * cutoff, cutoff);
        auto up = psi.segment((s | mask) * cutoff, cutoff);
        Vector new_up, new_down;
        if (disp) {
            new_up = cos_t * up + minus_i_sin_e * ((*disp) * down);
            new_down = cos_t * down + minus_i_sin_conj * ((*disp_dag) * up);
        } else {
            new_up = cos_t * up + minus_i_sin_e * down;
            new_down = cos_t * down + minus_i_sin_conj * up;
        }
        up = new_up;
        down = new_down;
    }
}

}  // namespace

std::vector<std::string> KickConfig::problems() const
{
    std::vector<std::string> out;
    if (!(theta_p >= 0.0))
        out.emplace_back("theta_p must be >= 0");
    if (!(period > 0.0))
        out.emplace_back("period must be > 0");
    if (!(eta >= 0.0 && eta < 1.0))
        out.emplace_back("eta must be in [0, 1)");
    if (tones.empty()) {
        out.emplace_back("at least one tone is required");
    } else {
        double total = 0.0;
        for (const auto& t : tones)
            total += t.weight;
        if (std::abs(total - 1.0) > 1e-9)
            out.emplace_back("tone weights must sum to 1");
    }
    return out;
}

void KickConfig::check() const
{
    auto p = problems();
    if (p.empty())
        return;
    std::string msg = "invalid kick configuration:";
    for (const auto& s : p)
        msg += " " + s + ";";
    throw InvalidParameter(msg);
}

Complex KickConfig::tone_factor(long pulse_index) const
{
    Complex c = 0.0;
    const double n = static_cast<double>(pulse_index);
    for (const auto& t : tones) {
        const double step = wrap_angle(t.delta_omega * period);
        c += t.weight * std::polar(1.0, wrap_angle(step * n) + t.phase);
    }
    return c;
}

void FrameConfig::check() const
{
    if (!(omega_t > 0.0))
        throw InvalidParameter("omega_t must be > 0");
}

std::string to_string(Branch b)
{
    switch (b) {
    case Branch::carrier:
        return "carrier";
    case Branch::red:
        return "red";
    case Branch::blue:
        return "blue";
    }
    return "carrier";
}

ResonanceAngle resonance_angle(const FrameConfig& frame, double tone_offset, double period,
                               Branch branch)
{
    double w = frame.omega_0_plus_dw + tone_offset;
    if (branch == Branch::red)
        w -= frame.omega_t;
    else if (branch == Branch::blue)
        w += frame.omega_t;
    double theta = std::fmod(w * period, kTwoPi);
    if (theta < 0.0)
        theta += kTwoPi;
    if (theta >= kTwoPi)
        theta = 0.0;
    return {theta, branch};
}

Matrix kick_operator(const KickConfig& cfg, long pulse_index, const FockSpace& fock,
                     int num_qubits)
{
    cfg.check();
    const int c = fock.cutoff();
    const int dim = (1 << num_qubits) * c;
    const Matrix disp = cfg.eta > 0.0 ? displacement_operator(Complex(0.0, cfg.eta), fock)
                                      : Matrix::Identity(c, c);
    const Complex tone = cfg.tone_factor(pulse_index);
    const double angle = cfg.theta_p * std::abs(tone) / 2.0;
    const Complex e = std::abs(tone) > 0.0 ? tone / std::abs(tone) : Complex(1.0, 0.0);

    Matrix total = Matrix::Identity(dim, dim);
    for (int ion = 0; ion < num_qubits; ++ion) {
        const Matrix a = kron(spin_operator(e * sigma_plus(), ion, num_qubits), disp);
        const Matrix gen = a + a.adjoint();
        const Matrix k = std::cos(angle) * Matrix::Identity(dim, dim) -
                         Complex(0.0, std::sin(angle)) * gen;
        total = k * total;
    }
    return total;
}

Vector free_evolution(const FrameConfig& frame, double period, const FockSpace& fock,
                      int num_qubits)
{
    const int c = fock.cutoff();
    const double trap_step = wrap_angle(frame.omega_t * period);
    const double spin_step = wrap_angle(frame.omega_0_plus_dw * period / 2.0);
    Vector diag((1 << num_qubits) * c);
    for (int s = 0; s < (1 << num_qubits); ++s) {
        int z = 0;
        for (int ion = 0; ion < num_qubits; ++ion)
            z += (s >> ion) & 1 ? 1 : -1;
        for (int n = 0; n < c; ++n)
            diag[s * c + n] = std::polar(1.0, -wrap_angle(trap_step * n + spin_step * z));
    }
    return diag;
}

Propagation propagate(const QuantumState& state, const KickConfig& cfg, const FrameConfig& frame,
                      long pulses)
{
    if (pulses < 0)
        throw InvalidParameter("pulse count must be >= 0");
    cfg.check();
    frame.check();
    const int m = state.num_qubits();
    const FockSpace fock = state.fock();
    const int c = fock.cutoff();
    const bool coupled = cfg.eta > 0.0;

    Matrix disp, disp_dag;
    if (coupled) {
        disp = displacement_operator(Complex(0.0, cfg.eta), fock);
        disp_dag = disp.adjoint();
    }
    const Vector free = free_evolution(frame, cfg.period, fock, m);

    Vector psi = state.amplitudes();
    double max_leakage = coupled ? QuantumState(m, fock, psi).leakage() : 0.0;
    for (long n = 0; n < pulses; ++n) {
        const Complex tone = cfg.tone_factor(n);
        const double mag = std::abs(tone);
        const double angle = cfg.theta_p * mag / 2.0;
        const Complex e = mag > 0.0 ? tone / mag : Complex(1.0, 0.0);
        const Complex coupling = Complex(0.0, -std::sin(angle)) * e;
        for (int ion = 0; ion < m; ++ion)
            apply_ion_kick(psi, ion, m, c, std::cos(angle), coupling, coupled ? &disp : nullptr,
                           coupled ? &disp_dag : nullptr);
        psi = psi.cwiseProduct(free);
        if (coupled) {
            double leak = 0.0;
            for (int s = 0; s < (1 << m); ++s)
                leak += std::norm(psi[s * c + c - 1]) + std::norm(psi[s * c + c - 2]);
            max_leakage = std::max(max_leakage, leak);
        }
    }
    if (max_leakage > kLeakageLimit) {
        std::ostringstream msg;
        msg << "propagation leaked " << max_leakage << " into the top Fock levels (cutoff " << c
            << ")";
        throw CutoffTooSmall(msg.str(), max_leakage);
    }
    return {QuantumState(m, fock, std::move(psi)), max_leakage};
}

Matrix constant_kick_propagator(const KickConfig& cfg, const FrameConfig& frame,
                                const FockSpace& fock, long pulses, int num_qubits)
{
    if (pulses < 0)
        throw InvalidParameter("pulse count must be >= 0");
    for (const auto& t : cfg.tones)
        if (std::abs(wrap_angle(t.delta_omega * cfg.period)) > 1e-9)
            throw InvalidParameter("constant_kick_propagator needs tones commensurate with the period");
    const Matrix step = free_evolution(frame, cfg.period, fock, num_qubits).asDiagonal() *
                        kick_operator(cfg, 0, fock, num_qubits);
    Matrix result = Matrix::Identity(step.rows(), step.cols());
    Matrix power = step;
    for (long n = pulses; n > 0; n >>= 1) {
        if (n & 1)
            result = power * result;
        if (n > 1)
            power = power * power;
    }
    return result;
}

FirstOrderAmplitudes first_order_amplitudes(const KickConfig& cfg, const FrameConfig& frame,
                                            long pulses, Warnings* warnings, double mean_phonons)
{
    cfg.check();
    const double ld = cfg.eta * std::sqrt(mean_phonons + 1.0);
    if (ld > 0.3) {
        std::ostringstream msg;
        msg << "eta sqrt(nbar + 1) = " << ld << " is outside the Lamb-Dicke regime";
        warn(warnings, msg.str());
    }
    Complex carrier = 0.0, red = 0.0, blue = 0.0;
    for (const auto& t : cfg.tones) {
        const Complex w = t.weight * std::polar(1.0, t.phase);
        const double base = (frame.omega_0_plus_dw + t.delta_omega) * cfg.period;
        const double trap = frame.omega_t * cfg.period;
        carrier += w * grating_sum(base, pulses);
        red += w * grating_sum(base - trap, pulses);
        blue += w * grating_sum(base + trap, pulses);
    }
    const double half = cfg.theta_p / 2.0;
    // -i (theta/2) [sigma_+ S_c + i eta (sigma_+ a S_r + sigma_+ a^dag S_b)]
    return {Complex(0.0, -half) * carrier, half * cfg.eta * red, half * cfg.eta * blue};
}

double min_pulses_for_resolution(double omega_t, double period, double eta)
{
    if (!(omega_t > 0.0 && period > 0.0 && eta > 0.0))
        throw InvalidParameter("min_pulses_for_resolution needs positive inputs");
    return 1.0 / (omega_t * period * eta);
}

}  // namespace combtrap
