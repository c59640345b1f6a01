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

#include "combtrap/msgate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "combtrap/dynamics.hpp"
#include "combtrap/parallel.hpp"
#include "combtrap/units.hpp"

namespace combtrap {

namespace {

// Fock trajectories with thermal weight below this are skipped.
constexpr double kTrajectoryFloor = 1e-10;

constexpr int kDownDown = 0;
constexpr int kUpUp = 3;

Matrix force_axis(double phi)
{
    const Matrix sp = Complex(0.0, 1.0) * std::polar(1.0, phi) * sigma_plus();
    return sp + sp.adjoint();
}

Vector normalized_spin(const Vector& spin)
{
    if (spin.size() != 4)
        throw InvalidParameter("two-ion spin state must have 4 amplitudes");
    const double n = spin.norm();
    if (!(n > 0.0))
        throw InvalidParameter("spin state has zero norm");
    return spin / n;
}

}  // namespace

std::vector<std::string> GateConfig::problems() const
{
    std::vector<std::string> out;
    if (!(eta > 0.0 && eta < 1.0))
        out.emplace_back("eta must be in (0, 1)");
    if (!(omega >= 0.0))
        out.emplace_back("omega must be >= 0");
    if (!(delta > 0.0))
        out.emplace_back("delta must be > 0");
    if (!(duration >= 0.0))
        out.emplace_back("duration must be >= 0");
    if (!(trap_frequency > 0.0))
        out.emplace_back("trap_frequency must be > 0");
    if (!(initial_nbar >= 0.0))
        out.emplace_back("initial_nbar must be >= 0");
    if (!(period > 0.0))
        out.emplace_back("period must be > 0");
    if (cutoff < 2)
        out.emplace_back("cutoff must be >= 2");
    return out;
}

void GateConfig::check(Warnings* warnings) const
{
    if (auto p = problems(); !p.empty()) {
        std::string msg = "invalid gate configuration:";
        for (const auto& s : p)
            msg += " " + s + ";";
        throw InvalidParameter(msg);
    }
    if (eta * omega > 0.1 * trap_frequency) {
        std::ostringstream msg;
        msg << "eta*omega = " << eta * omega << " rad/s is not small against the trap frequency "
            << trap_frequency << " rad/s";
        warn(warnings, msg.str());
    }
}

GateTiming gate_parameters(double eta, double omega)
{
    if (!(eta > 0.0 && omega > 0.0))
        throw InvalidParameter("gate_parameters needs positive eta and omega");
    const double delta = 2.0 * eta * omega;
    return {delta, kTwoPi / delta};
}

long gate_pulses(double duration, double period)
{
    return std::lround(duration / period);
}

Vector ground_spin_state()
{
    Vector v = Vector::Zero(4);
    v[kDownDown] = 1.0;
    return v;
}

SpinDensityMatrix ms_evolve_analytic(const GateConfig& cfg, const Vector& initial_spin)
{
    cfg.check();
    const Vector psi = normalized_spin(initial_spin);

    // Eigenbasis of the force axis S on each ion; J = (s1 + s2)/2.
    Eigen::SelfAdjointEigenSolver<Matrix> axis(force_axis(cfg.spin_phase));
    const Matrix basis = kron(axis.eigenvectors(), axis.eigenvectors());
    double j[4];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            j[2 * a + b] = 0.5 * (axis.eigenvalues()[a] + axis.eigenvalues()[b]);

    const double t = cfg.duration;
    const double ratio = cfg.eta * cfg.omega / cfg.delta;
    const double alpha_sq = std::norm(ratio * (1.0 - std::polar(1.0, cfg.delta * t)));
    const double phi = ratio * ratio * (cfg.delta * t - std::sin(cfg.delta * t));

    Matrix rho = basis.adjoint() * (psi * psi.adjoint()) * basis;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const double dj = j[a] - j[b];
            const double damping = std::exp(-alpha_sq * dj * dj * (cfg.initial_nbar + 0.5));
            rho(a, b) *= damping * std::polar(1.0, phi * (j[a] * j[a] - j[b] * j[b]));
        }
    rho = basis * rho * basis.adjoint();
    return SpinDensityMatrix(0.5 * (rho + rho.adjoint()));
}

NumericGateResult ms_evolve_numeric(const GateConfig& cfg, const Vector& initial_spin,
                                    Warnings* warnings, int threads)
{
    cfg.check(warnings);
    const Vector spin = normalized_spin(initial_spin);
    const long pulses = gate_pulses(cfg.duration, cfg.period);
    const FockSpace fock(cfg.cutoff);

    // The reference offset sits on a comb harmonic, which is the zero of the
    // stroboscopic frame. Blue tone: (dw_b + w_t) T = delta T; red tone:
    // (dw_r - w_t) T = -delta T.
    KickConfig kick;
    kick.theta_p = 2.0 * cfg.omega * cfg.period;
    kick.eta = cfg.eta;
    kick.period = cfg.period;
    kick.tones = {Tone{-cfg.trap_frequency + cfg.delta, cfg.spin_phase, 0.5},
                  Tone{cfg.trap_frequency - cfg.delta, cfg.spin_phase, 0.5}};
    const FrameConfig frame{cfg.trap_frequency, 0.0};

    const RealVector thermal = thermal_population(cfg.initial_nbar, fock);
    std::vector<int> levels;
    for (int n = 0; n < cfg.cutoff; ++n)
        if (thermal[n] > kTrajectoryFloor)
            levels.push_back(n);

    std::vector<Matrix> partial(levels.size());
    std::vector<double> leaks(levels.size(), 0.0);
    parallel_for(levels.size(), threads, [&](std::size_t i) {
        const int n = levels[i];
        const auto out = propagate(QuantumState::product(spin, n, fock), kick, frame, pulses);
        partial[i] = thermal[n] * partial_trace_motion(out.state).entries();
        leaks[i] = out.max_leakage;
    });

    Matrix rho = Matrix::Zero(4, 4);
    double weight = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        rho += partial[i];
        weight += thermal[levels[i]];
    }
    rho /= weight;
    const double leak = leaks.empty() ? 0.0 : *std::max_element(leaks.begin(), leaks.end());
    return {SpinDensityMatrix(0.5 * (rho + rho.adjoint())), pulses, leak};
}

BellOverlap bell_overlap(const SpinDensityMatrix& rho)
{
    if (rho.dimension() != 4)
        throw InvalidParameter("Bell overlap needs a two-ion density matrix");
    const Complex coherence = rho(kUpUp, kDownDown);
    double phase = std::arg(coherence);
    if (phase < 0.0)
        phase += kTwoPi;
    return {0.5 * (rho.population(kDownDown) + rho.population(kUpUp)) + std::abs(coherence), phase};
}

Matrix analysis_rotation(double phi)
{
    const Matrix axis = std::cos(phi) * sigma_x() + std::sin(phi) * sigma_y();
    const double c = std::cos(M_PI / 4.0);
    const double s = std::sin(M_PI / 4.0);
    return c * Matrix::Identity(2, 2) - Complex(0.0, s) * axis;
}

namespace {

Matrix rotated(const SpinDensityMatrix& rho, double phi)
{
    if (rho.dimension() != 4)
        throw InvalidParameter("parity needs a two-ion density matrix");
    const Matrix r = analysis_rotation(phi);
    const Matrix rr = kron(r, r);
    return rr * rho.entries() * rr.adjoint();
}

}  // namespace

double parity(const SpinDensityMatrix& rho, double phi)
{
    const Matrix zz = kron(sigma_z(), sigma_z());
    return (zz * rotated(rho, phi)).trace().real();
}

double measured_parity(const SpinDensityMatrix& rho, double phi, const DetectionError& detection)
{
    const Matrix rot = rotated(rho, phi);
    const Matrix id = Matrix::Identity(2, 2);
    const double zz = (kron(sigma_z(), sigma_z()) * rot).trace().real();
    const double z1 = (kron(sigma_z(), id) * rot).trace().real();
    const double z2 = (kron(id, sigma_z()) * rot).trace().real();
    const double a = 1.0 - detection.down_to_up - detection.up_to_down;
    const double b = detection.down_to_up - detection.up_to_down;
    return a * a * zz + a * b * (z1 + z2) + b * b;
}

Populations measured_populations(const SpinDensityMatrix& rho, const DetectionError& detection)
{
    if (rho.dimension() != 4)
        throw InvalidParameter("populations need a two-ion density matrix");
    Eigen::Matrix2d m;
    m << 1.0 - detection.down_to_up, detection.up_to_down,
         detection.down_to_up, 1.0 - detection.up_to_down;
    Eigen::Vector4d truth;
    for (int s = 0; s < 4; ++s)
        truth[s] = rho.population(s);
    Eigen::Matrix4d both;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            both.block<2, 2>(2 * i, 2 * k) = m(i, k) * m;
    const Eigen::Vector4d seen = both * truth;
    return {seen[kDownDown], seen[kUpUp]};
}

ParityScan fit_parity(std::vector<ParityPoint> rows)
{
    if (rows.size() < 3)
        throw InsufficientScan("parity fit needs at least three phases");
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.phi < b.phi; });
    const double span = rows.back().phi - rows.front().phi;
    const double spacing = span / static_cast<double>(rows.size() - 1);
    if (span + spacing < M_PI - 1e-9) {
        std::ostringstream msg;
        msg << "parity scan covers " << span + spacing << " rad of phase; one period of cos 2phi needs pi";
        throw InsufficientScan(msg.str());
    }
    Eigen::MatrixXd design(rows.size(), 3);
    Eigen::VectorXd values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = std::cos(2.0 * rows[i].phi);
        design(i, 2) = std::sin(2.0 * rows[i].phi);
        values[i] = rows[i].parity;
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(values);
    // offset + A cos(2phi + p) = offset + A cos p cos 2phi - A sin p sin 2phi
    ParityScan scan;
    scan.rows = std::move(rows);
    scan.offset = coef[0];
    const double amplitude = std::hypot(coef[1], coef[2]);
    scan.contrast = std::clamp(amplitude, 0.0, 1.0);
    scan.peak_to_peak = 2.0 * scan.contrast;
    scan.phase = std::atan2(-coef[2], coef[1]);
    if (scan.phase < 0.0)
        scan.phase += kTwoPi;
    return scan;
}

ParityScan parity_scan(const SpinDensityMatrix& rho, std::span<const double> phis,
                       const DetectionError& detection, int threads)
{
    std::vector<ParityPoint> rows(phis.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        rows[i] = {phis[i], measured_parity(rho, phis[i], detection)};
    });
    return fit_parity(std::move(rows));
}

std::vector<double> uniform_phases(int points)
{
    if (points < 3)
        throw InsufficientScan("parity scan needs at least three phases");
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k)
        out[k] = kTwoPi * k / points;
    return out;
}

EntanglementReport fidelity_witness(const Populations& populations, const ParityScan& scan)
{
    const ParityScan fit = fit_parity(scan.rows);
    EntanglementReport r;
    r.down_down = populations.down_down;
    r.up_up = populations.up_up;
    r.contrast = fit.contrast;
    r.peak_to_peak = fit.peak_to_peak;
    const double pops = (r.down_down + r.up_up) / 2.0;
    r.fidelity = std::clamp(pops + r.peak_to_peak / 4.0, 0.0, 1.0);
    r.fidelity_amplitude_reading = std::clamp(pops + r.contrast / 4.0, 0.0, 1.0);
    r.entangled = r.fidelity > 0.5;
    r.phase = fit.phase;
    return r;
}

}  // namespace combtrap
