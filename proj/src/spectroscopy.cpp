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

#include "combtrap/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "combtrap/hilbert.hpp"
#include "combtrap/parallel.hpp"
#include "combtrap/units.hpp"

namespace combtrap {

namespace {

// Thermal weights below this are dropped from the Fock-state averages.
constexpr double kWeightFloor = 1e-14;

struct Occupation {
    int n;
    double p;
};

std::vector<Occupation> thermal_levels(double nbar, int cutoff)
{
    const RealVector p = thermal_population(nbar, FockSpace(cutoff));
    std::vector<Occupation> out;
    for (int n = 0; n < cutoff; ++n)
        if (p[n] > kWeightFloor)
            out.push_back({n, p[n]});
    return out;
}

long probe_pulses(const PulseTrainSpec& spec, double duration)
{
    return std::lround(duration * effective_rep_rate(spec));
}

std::string mode_label(std::size_t modes, std::size_t mode, int dn)
{
    std::string out = "(";
    for (std::size_t m = 0; m < modes; ++m) {
        if (m)
            out += ",";
        const int v = m == mode ? dn : 0;
        out += v > 0 ? "+" + std::to_string(v) : std::to_string(v);
    }
    return out + ")";
}

// Evaluates the flip probability of one spectrum configuration at arbitrary
// offsets. Built once per scan; evaluation is const and thread-safe.
class SpectrumModel {
public:
    SpectrumModel(const IonSpec& ion, const PulseTrainSpec& spec, const SpectrumScanConfig& cfg,
                  Warnings* warnings)
        : ion_(ion), cfg_(cfg), period_(effective_period(spec)),
          pulses_(probe_pulses(spec, cfg.probe_duration_s))
    {
        if (auto p = cfg.problems(); !p.empty()) {
            std::string msg = "invalid spectrum scan:";
            for (const auto& s : p)
                msg += " " + s + ";";
            throw InvalidParameter(msg);
        }
        spec.check();
        for (std::size_t m = 0; m < cfg.modes.size(); ++m) {
            const auto& mode = cfg.modes[m];
            const double bound =
                min_pulses_for_resolution(to_angular(mode.trap_frequency_hz), period_, mode.lamb_dicke);
            if (static_cast<double>(pulses_) <= bound) {
                std::ostringstream msg;
                msg << "mode " << m << ": N = " << pulses_ << " does not exceed the resolution bound "
                    << bound;
                warn(warnings, msg.str());
            }
            const double ld = mode.lamb_dicke * std::sqrt(cfg.initial_nbar[m] + 1.0);
            if (ld > 0.3) {
                std::ostringstream msg;
                msg << "mode " << m << ": eta sqrt(nbar + 1) = " << ld
                    << " is outside the Lamb-Dicke regime";
                warn(warnings, msg.str());
            }
            levels_.push_back(thermal_levels(cfg.initial_nbar[m], cfg.cutoff));
        }
        exact_ = cfg.exact;
        if (exact_ && cfg.modes.size() != 1) {
            warn(warnings, "exact spectrum engine supports one mode; using first-order analytics");
            exact_ = false;
        }
    }

    long pulses() const { return pulses_; }
    bool exact() const { return exact_; }

    double frame_frequency(double delta_hz) const
    {
        return to_angular(ion_.qubit_splitting_hz + delta_hz);
    }

    double analytic(double delta_hz) const
    {
        const double w_s = frame_frequency(delta_hz);
        const std::size_t modes = cfg_.modes.size();
        std::vector<double> red(modes), blue(modes);
        double carrier = 0.0;
        for (std::size_t m = 0; m < modes; ++m) {
            const KickConfig kick{cfg_.theta_p, {Tone{}}, cfg_.modes[m].lamb_dicke, period_};
            const FrameConfig frame{to_angular(cfg_.modes[m].trap_frequency_hz), w_s};
            const auto amps = first_order_amplitudes(kick, frame, pulses_);
            carrier = std::norm(amps.carrier);
            red[m] = std::norm(amps.red);
            blue[m] = std::norm(amps.blue);
        }
        // Odometer over the per-mode thermal level lists.
        std::vector<std::size_t> idx(modes, 0);
        double total = 0.0;
        while (true) {
            double weight = carrier;
            double p = 1.0;
            for (std::size_t m = 0; m < modes; ++m) {
                const auto& occ = levels_[m][idx[m]];
                weight += red[m] * occ.n + blue[m] * (occ.n + 1);
                p *= occ.p;
            }
            const double s = std::sin(std::sqrt(weight));
            total += p * s * s;
            std::size_t m = 0;
            for (; m < modes; ++m) {
                if (++idx[m] < levels_[m].size())
                    break;
                idx[m] = 0;
            }
            if (m == modes)
                break;
        }
        return std::clamp(total, 0.0, 1.0);
    }

    /// Returns (flip probability, weighted leakage).
    std::pair<double, double> exact_point(double delta_hz) const
    {
        const auto& mode = cfg_.modes.front();
        const FockSpace fock(cfg_.cutoff);
        const int c = cfg_.cutoff;
        const KickConfig kick{cfg_.theta_p, {Tone{}}, mode.lamb_dicke, period_};
        const FrameConfig frame{to_angular(mode.trap_frequency_hz), frame_frequency(delta_hz)};
        const Matrix u = constant_kick_propagator(kick, frame, fock, pulses_);
        double flip = 0.0, leak = 0.0;
        for (const auto& occ : levels_.front()) {
            const int col = occ.n;  // |down, n>
            flip += occ.p * u.col(col).segment(c, c).squaredNorm();
            const double top = std::norm(u(c - 1, col)) + std::norm(u(c - 2, col)) +
                               std::norm(u(2 * c - 1, col)) + std::norm(u(2 * c - 2, col));
            leak += occ.p * top;
        }
        return {std::clamp(flip, 0.0, 1.0), leak};
    }

    std::vector<std::string> labels(double delta_hz) const
    {
        std::vector<std::string> out;
        const double w_s = frame_frequency(delta_hz);
        const double half_lobe = M_PI / static_cast<double>(std::max(1L, pulses_));
        const std::size_t modes = cfg_.modes.size();
        auto near = [&](double w) { return std::abs(std::remainder(w * period_, kTwoPi)) < half_lobe; };
        if (near(w_s))
            out.push_back(mode_label(modes, 0, 0));
        for (std::size_t m = 0; m < modes; ++m) {
            const double wt = to_angular(cfg_.modes[m].trap_frequency_hz);
            if (near(w_s - wt))
                out.push_back(mode_label(modes, m, -1));
            if (near(w_s + wt))
                out.push_back(mode_label(modes, m, +1));
        }
        return out;
    }

private:
    const IonSpec& ion_;
    const SpectrumScanConfig& cfg_;
    double period_;
    long pulses_;
    bool exact_ = false;
    std::vector<std::vector<Occupation>> levels_;
};

}  // namespace

std::vector<RabiRow> carrier_rabi_scan(const IonSpec& ion, const PulseTrainSpec& spec,
                                       std::span<const double> durations_s,
                                       const RabiScanOptions& options)
{
    ion.check();
    spec.check();
    const QParameter q = q_parameter(ion, spec, options.tol_q);
    const double nu = effective_rep_rate(spec);
    const double period = 1.0 / nu;
    const double locked_q = q.resonance == Resonance::off_resonant ? q.value : q.nearest;
    const double theta_p = pulse_area(raman_coupling(ion, spec).omega, period);

    const KickConfig kick{theta_p, {Tone{}}, 0.0, period};
    const double trap = ion.modes.empty() ? 1.0 : to_angular(ion.modes.front().trap_frequency_hz);
    const FrameConfig frame{trap, to_angular(locked_q * nu + options.net_offset_hz)};
    const FockSpace fock(2);
    const QuantumState start = QuantumState::basis({Spin::down}, 0, fock);

    std::vector<RabiRow> rows(durations_s.size());
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double t = durations_s[i];
        if (!(t >= 0.0))
            throw InvalidParameter("durations must be >= 0");
        rows[i] = {t, std::lround(t * nu), 0.0};
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].pulses < rows[b].pulses; });

    // The kick does not depend on the pulse index, so each chunk of sorted
    // durations continues from the previous one. The pulse-by-pulse arithmetic
    // is the same for any chunking, so results do not depend on the workers.
    const std::size_t chunks = std::min<std::size_t>(rows.size(), std::max(1, options.threads));
    parallel_for(chunks, options.threads, [&](std::size_t k) {
        QuantumState state = start;
        long done = 0;
        for (std::size_t j = rows.size() * k / chunks; j < rows.size() * (k + 1) / chunks; ++j) {
            RabiRow& row = rows[order[j]];
            state = propagate(state, kick, frame, row.pulses - done).state;
            done = row.pulses;
            row.p_up = state.spin_population(1);
        }
    });
    return rows;
}

std::vector<std::string> SpectrumScanConfig::problems() const
{
    std::vector<std::string> out;
    if (delta_omega_grid_hz.empty())
        out.emplace_back("delta_omega grid must be non-empty");
    else if (!std::is_sorted(delta_omega_grid_hz.begin(), delta_omega_grid_hz.end()))
        out.emplace_back("delta_omega grid must be sorted ascending");
    if (!(probe_duration_s > 0.0))
        out.emplace_back("probe_duration_s must be > 0");
    if (modes.empty())
        out.emplace_back("at least one mode is required");
    if (initial_nbar.size() != modes.size())
        out.emplace_back("initial_nbar needs one entry per mode");
    for (double n : initial_nbar)
        if (!(n >= 0.0))
            out.emplace_back("initial_nbar entries must be >= 0");
    for (std::size_t m = 0; m < modes.size(); ++m) {
        if (!(modes[m].trap_frequency_hz > 0.0))
            out.push_back("modes[" + std::to_string(m) + "].trap_frequency_hz must be > 0");
        if (!(modes[m].lamb_dicke > 0.0 && modes[m].lamb_dicke < 1.0))
            out.push_back("modes[" + std::to_string(m) + "].lamb_dicke must be in (0, 1)");
    }
    if (!(theta_p >= 0.0))
        out.emplace_back("theta_p must be >= 0");
    if (cutoff < 2)
        out.emplace_back("cutoff must be >= 2");
    return out;
}

SpectrumResult sideband_spectrum(const IonSpec& ion, const PulseTrainSpec& spec,
                                 const SpectrumScanConfig& cfg, Warnings* warnings)
{
    const SpectrumModel model(ion, spec, cfg, warnings);
    SpectrumResult result;
    result.pulses = model.pulses();
    result.theta_p = cfg.theta_p;
    result.modes = cfg.modes;
    result.exact = model.exact();
    result.rows.resize(cfg.delta_omega_grid_hz.size());
    std::vector<double> leaks(result.rows.size(), 0.0);

    parallel_for(result.rows.size(), cfg.threads, [&](std::size_t i) {
        const double delta = cfg.delta_omega_grid_hz[i];
        double p = 0.0;
        if (model.exact()) {
            auto [flip, leak] = model.exact_point(delta);
            p = flip;
            leaks[i] = leak;
        } else {
            p = model.analytic(delta);
        }
        result.rows[i] = {delta, p, model.labels(delta)};
    });
    result.max_leakage = leaks.empty() ? 0.0 : *std::max_element(leaks.begin(), leaks.end());
    if (result.max_leakage > kLeakageLimit) {
        std::ostringstream msg;
        msg << "spectrum propagation leaked " << result.max_leakage << " (cutoff " << cfg.cutoff << ")";
        throw CutoffTooSmall(msg.str(), result.max_leakage);
    }
    return result;
}

double flip_probability(const IonSpec& ion, const PulseTrainSpec& spec,
                        const SpectrumScanConfig& cfg, double delta_omega_hz)
{
    SpectrumScanConfig single = cfg;
    single.delta_omega_grid_hz = {delta_omega_hz};
    const SpectrumModel model(ion, spec, single, nullptr);
    return model.exact() ? model.exact_point(delta_omega_hz).first : model.analytic(delta_omega_hz);
}

SidebandOffsets sideband_offsets(const IonSpec& ion, const PulseTrainSpec& spec,
                                 const TrapMode& mode, long harmonic)
{
    const double carrier = static_cast<double>(harmonic) * effective_rep_rate(spec) - ion.qubit_splitting_hz;
    return {carrier, carrier + mode.trap_frequency_hz, carrier - mode.trap_frequency_hz};
}

long nearest_harmonic(const IonSpec& ion, const PulseTrainSpec& spec)
{
    return std::lround(ion.qubit_splitting_hz / effective_rep_rate(spec));
}

SidebandStrengths sideband_strengths(const IonSpec& ion, const PulseTrainSpec& spec,
                                     const SpectrumScanConfig& cfg, std::size_t mode)
{
    if (mode >= cfg.modes.size())
        throw InvalidParameter("mode index out of range");
    const auto offsets = sideband_offsets(ion, spec, cfg.modes[mode], nearest_harmonic(ion, spec));
    return {flip_probability(ion, spec, cfg, offsets.red_hz),
            flip_probability(ion, spec, cfg, offsets.blue_hz)};
}

std::vector<std::string> CoolingConfig::problems() const
{
    std::vector<std::string> out;
    if (cycles < 0)
        out.emplace_back("cycles must be >= 0");
    if (pulses_per_cycle < 1)
        out.emplace_back("pulses_per_cycle must be >= 1");
    if (!(initial_nbar >= 0.0))
        out.emplace_back("initial_nbar must be >= 0");
    if (!(recoil_heating_per_cycle >= 0.0))
        out.emplace_back("recoil_heating_per_cycle must be >= 0");
    if (cutoff < 2)
        out.emplace_back("cutoff must be >= 2");
    return out;
}

namespace {

double mean_occupation(const RealVector& p)
{
    double sum = 0.0;
    for (Eigen::Index n = 0; n < p.size(); ++n)
        sum += static_cast<double>(n) * p[n];
    return sum;
}

void red_sideband_pulse(RealVector& p, double reference_level)
{
    // Ascending n so that each level gives population down exactly once.
    for (Eigen::Index n = 1; n < p.size(); ++n) {
        const double s = std::sin(M_PI * std::sqrt(static_cast<double>(n) / reference_level) / 2.0);
        const double moved = s * s * p[n];
        p[n] -= moved;
        p[n - 1] += moved;
    }
}

void heat(RealVector& p, double quanta)
{
    if (quanta <= 0.0)
        return;
    const Eigen::Index c = p.size();
    // Explicit steps of the heating rate equation, small enough to stay positive.
    const int steps = std::max(1, static_cast<int>(std::ceil(quanta * (2.0 * c) / 0.5)));
    const double eps = quanta / steps;
    for (int k = 0; k < steps; ++k) {
        RealVector next = p;
        for (Eigen::Index n = 0; n < c; ++n) {
            const double up = n + 1 < c ? eps * (n + 1) * p[n] : 0.0;
            const double down = eps * n * p[n];
            next[n] -= up + down;
            if (n + 1 < c)
                next[n + 1] += up;
            if (n > 0)
                next[n - 1] += down;
        }
        p = next;
    }
}

}  // namespace

std::vector<CoolingRow> sideband_cool(const IonSpec& ion, const CoolingConfig& cfg, Warnings* warnings)
{
    if (auto p = cfg.problems(); !p.empty()) {
        std::string msg = "invalid cooling configuration:";
        for (const auto& s : p)
            msg += " " + s + ";";
        throw InvalidParameter(msg);
    }
    if (!ion.modes.empty()) {
        if (cfg.mode >= ion.modes.size())
            throw InvalidParameter("cooling mode index out of range");
        const double ld = ion.modes[cfg.mode].lamb_dicke * std::sqrt(cfg.initial_nbar + 1.0);
        if (ld > 0.3) {
            std::ostringstream msg;
            msg << "eta sqrt(nbar + 1) = " << ld
                << " at the start of cooling; the sqrt(n) sideband scaling is approximate";
            warn(warnings, msg.str());
        }
    }
    const FockSpace fock(cfg.cutoff);
    RealVector p = thermal_population(cfg.initial_nbar, fock);
    const int c = cfg.cutoff;
    const double initial_top = p[c - 1] + p[c - 2];

    std::vector<CoolingRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.cycles) + 1);
    rows.push_back({0, mean_occupation(p), p.sum()});
    for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
        for (int k = 0; k < cfg.pulses_per_cycle; ++k)
            red_sideband_pulse(p, static_cast<double>(cfg.pulses_per_cycle - k));
        heat(p, cfg.recoil_heating_per_cycle);
        const double top = p[c - 1] + p[c - 2];
        if (top > std::max(kLeakageLimit, initial_top)) {
            std::ostringstream msg;
            msg << "recoil heating pushed " << top << " into the top Fock levels (cutoff " << c << ")";
            throw CutoffTooSmall(msg.str(), top);
        }
        rows.push_back({cycle, mean_occupation(p), p.sum()});
    }
    return rows;
}

int cycles_to_reach(const std::vector<CoolingRow>& rows, double target)
{
    for (const auto& r : rows)
        if (r.nbar <= target)
            return r.cycle;
    return -1;
}

double thermometry_nbar(double red_strength, double blue_strength)
{
    if (!(red_strength >= 0.0) || !(blue_strength > 0.0) || !(red_strength < blue_strength)) {
        std::ostringstream msg;
        msg << "thermometry needs 0 <= red < blue, got red = " << red_strength
            << ", blue = " << blue_strength;
        throw InvalidRatio(msg.str());
    }
    const double r = red_strength / blue_strength;
    return r / (1.0 - r);
}

}  // namespace combtrap
