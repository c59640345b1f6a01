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

#include "combtrap/comb.hpp"

#include <cmath>
#include <sstream>

#include "combtrap/errors.hpp"
#include "combtrap/grating.hpp"
#include "combtrap/units.hpp"

namespace combtrap {

namespace {

// Teeth further than this (in Hz, times 1/tau) from the carrier are dropped
// from the tooth sum; the sech envelope is below 1e-6 there.
constexpr double kToothWindow = 5.0;

std::string join_problems(const std::string& what, const std::vector<std::string>& problems)
{
    std::ostringstream out;
    out << what << ":";
    for (const auto& p : problems)
        out << " " << p << ";";
    return out.str();
}

}  // namespace

std::string to_string(Envelope e)
{
    return e == Envelope::sech ? "sech" : "gaussian";
}

Envelope envelope_from_string(const std::string& name)
{
    if (name == "sech")
        return Envelope::sech;
    if (name == "gaussian")
        return Envelope::gaussian;
    throw InvalidParameter("unknown envelope '" + name + "' (expected sech or gaussian)");
}

std::vector<std::string> PulseTrainSpec::problems() const
{
    std::vector<std::string> out;
    if (!(carrier_frequency_hz > 0.0))
        out.emplace_back("carrier_frequency_hz must be > 0");
    if (!(rep_rate_hz > 0.0))
        out.emplace_back("rep_rate_hz must be > 0");
    if (!(pulse_duration_s > 0.0))
        out.emplace_back("pulse_duration_s must be > 0");
    if (pick_divisor < 1)
        out.emplace_back("pick_divisor must be >= 1");
    if (pulse_count < 0)
        out.emplace_back("pulse_count must be >= 0");
    if (!(intensity_ratio >= 0.0))
        out.emplace_back("intensity_ratio must be >= 0");
    if (rep_rate_hz > 0.0 && pulse_duration_s > 0.0 && pick_divisor >= 1) {
        const double duty = pulse_duration_s * rep_rate_hz / pick_divisor;
        if (!(duty < 0.1)) {
            std::ostringstream msg;
            msg << "pulse_duration_s * effective rep rate = " << duty
                << " violates the delta-kick validity condition (< 0.1)";
            out.push_back(msg.str());
        }
    }
    return out;
}

void PulseTrainSpec::check() const
{
    if (auto p = problems(); !p.empty())
        throw InvalidParameter(join_problems("invalid pulse train", p));
}

std::vector<std::string> IonSpec::problems() const
{
    std::vector<std::string> out;
    if (!(qubit_splitting_hz > 0.0))
        out.emplace_back("qubit_splitting_hz must be > 0");
    if (!(detuning_hz > 0.0))
        out.emplace_back("detuning_hz must be > 0");
    if (!(linewidth_hz > 0.0))
        out.emplace_back("linewidth_hz must be > 0");
    if (!(saturation_intensity > 0.0))
        out.emplace_back("saturation_intensity must be > 0");
    if (detuning_hz > 0.0 && linewidth_hz > 0.0 && !(detuning_hz / linewidth_hz > 100.0))
        out.emplace_back("detuning_hz / linewidth_hz must exceed 100 for adiabatic elimination");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& m = modes[i];
        if (!(m.trap_frequency_hz > 0.0))
            out.push_back("modes[" + std::to_string(i) + "].trap_frequency_hz must be > 0");
        if (!(m.lamb_dicke > 0.0 && m.lamb_dicke < 1.0))
            out.push_back("modes[" + std::to_string(i) + "].lamb_dicke must be in (0, 1)");
    }
    return out;
}

void IonSpec::check() const
{
    if (auto p = problems(); !p.empty())
        throw InvalidParameter(join_problems("invalid ion", p));
}

std::vector<BeamTone> BeamGeometry::net_tones() const
{
    if (tones_on_beam1.empty())
        return {BeamTone{net_offset_hz(), 1.0}};
    std::vector<BeamTone> out;
    out.reserve(tones_on_beam1.size());
    for (const auto& t : tones_on_beam1)
        out.push_back({ao1_offset_hz + t.offset_hz - ao2_offset_hz, t.amplitude_fraction});
    return out;
}

std::vector<std::string> BeamGeometry::problems() const
{
    std::vector<std::string> out;
    if (tones_on_beam1.empty())
        return out;
    double total = 0.0;
    for (std::size_t i = 0; i < tones_on_beam1.size(); ++i) {
        const double f = tones_on_beam1[i].amplitude_fraction;
        if (!(f >= 0.0))
            out.push_back("tones_on_beam1[" + std::to_string(i) + "].amplitude_fraction must be >= 0");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9)
        out.emplace_back("tones_on_beam1 amplitude fractions must sum to 1");
    return out;
}

void BeamGeometry::check() const
{
    if (auto p = problems(); !p.empty())
        throw InvalidParameter(join_problems("invalid beam geometry", p));
}

double effective_rep_rate(const PulseTrainSpec& spec)
{
    return spec.rep_rate_hz / spec.pick_divisor;
}

double effective_period(const PulseTrainSpec& spec)
{
    return 1.0 / effective_rep_rate(spec);
}

std::string to_string(Resonance r)
{
    switch (r) {
    case Resonance::integer:
        return "integer";
    case Resonance::half_integer:
        return "half_integer";
    case Resonance::off_resonant:
        break;
    }
    return "off_resonant";
}

QParameter q_parameter(const IonSpec& ion, const PulseTrainSpec& spec, double tol_q)
{
    // Written as n * (w0 / nu_R) so that picking scales q exactly.
    QParameter q;
    q.value = spec.pick_divisor * (ion.qubit_splitting_hz / spec.rep_rate_hz);
    q.nearest = std::round(2.0 * q.value) / 2.0;
    const double deviation = std::abs(q.value - q.nearest);
    if (deviation <= tol_q * std::abs(q.value)) {
        q.resonance = std::floor(q.nearest) == q.nearest ? Resonance::integer
                                                          : Resonance::half_integer;
    }
    return q;
}

double envelope_spectrum(const PulseTrainSpec& spec, double omega)
{
    const double tau = spec.pulse_duration_s;
    switch (spec.envelope) {
    case Envelope::sech:
        return std::sqrt(M_PI / 2.0) * tau / std::cosh(omega * tau / 2.0);
    case Envelope::gaussian: {
        const double x = omega * tau / M_PI;
        return tau * std::exp(-x * x / 2.0);
    }
    }
    return 0.0;
}

std::complex<double> comb_tooth_amplitude(const PulseTrainSpec& spec, long tooth_index)
{
    const double nu = effective_rep_rate(spec);
    return {nu * envelope_spectrum(spec, kTwoPi * static_cast<double>(tooth_index) * nu), 0.0};
}

std::complex<double> train_spectrum(const PulseTrainSpec& spec, double omega, long pulses)
{
    // sum_{n=1..N} e^{-i w n T} = e^{-i w T} * sum_{n=0..N-1} e^{-i w n T}
    const double period = effective_period(spec);
    const double theta = -omega * period;
    return envelope_spectrum(spec, omega) * std::polar(1.0, theta) * grating_sum(theta, pulses);
}

double tooth_correlation(const PulseTrainSpec& spec, long q, double tooth_offset)
{
    const double nu = effective_rep_rate(spec);
    const long half_width =
        static_cast<long>(std::ceil(kToothWindow / (spec.pulse_duration_s * nu)));
    double sum = 0.0;
    for (long l = -half_width; l <= half_width; ++l) {
        const double k = static_cast<double>(l) + tooth_offset;
        sum += envelope_spectrum(spec, kTwoPi * k * nu) *
               envelope_spectrum(spec, kTwoPi * (k - static_cast<double>(q)) * nu);
    }
    return nu * nu * sum;
}

double suppression_factor(double omega0_tau, Envelope envelope)
{
    const double x = std::abs(omega0_tau);
    if (envelope == Envelope::gaussian)
        return std::exp(-x * x / (4.0 * M_PI * M_PI));
    if (x < 1e-6)
        return 1.0 - x * x / 24.0;
    return x / (std::exp(x / 2.0) - std::exp(-x / 2.0));
}

RamanCoupling raman_coupling(const IonSpec& ion, const PulseTrainSpec& spec)
{
    ion.check();
    spec.check();
    const double gamma = to_angular(ion.linewidth_hz);
    const double delta = to_angular(ion.detuning_hz);
    const double w0_tau = to_angular(ion.qubit_splitting_hz) * spec.pulse_duration_s;

    RamanCoupling out;
    out.omega0 = spec.intensity_ratio * gamma * gamma / (2.0 * delta);
    out.suppression = suppression_factor(w0_tau, spec.envelope);
    out.omega = out.omega0 * out.suppression;
    out.q_teeth = std::lround(q_parameter(ion, spec).value);
    const double zero = tooth_correlation(spec, 0);
    out.omega_tooth_sum = zero > 0.0 ? out.omega0 * tooth_correlation(spec, out.q_teeth) / zero : 0.0;
    return out;
}

RamanCoupling raman_rabi_frequency(const IonSpec& ion, const PulseTrainSpec& spec, double tol_q)
{
    const QParameter q = q_parameter(ion, spec, tol_q);
    if (q.resonance != Resonance::integer) {
        std::ostringstream msg;
        msg << "q = " << q.value << " is " << to_string(q.resonance)
            << "; comb-driven Raman transitions need an integer q";
        throw NotOnResonance(msg.str());
    }
    return raman_coupling(ion, spec);
}

double pulse_area(double omega, double period)
{
    return omega * period;
}

double pulse_area(const IonSpec& ion, const PulseTrainSpec& spec, double tol_q)
{
    return pulse_area(raman_rabi_frequency(ion, spec, tol_q).omega, effective_period(spec));
}

}  // namespace combtrap
