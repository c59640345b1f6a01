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

#include "combtrap/hilbert.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace combtrap {

namespace {

std::atomic<std::uint64_t> next_generator_id{1};

}  // namespace

FockSpace::FockSpace(int cutoff) : cutoff_(cutoff)
{
    if (cutoff < 2)
        throw InvalidParameter("Fock cutoff must be >= 2, got " + std::to_string(cutoff));
}

QuantumState::QuantumState(int num_qubits, FockSpace fock, Vector amplitudes)
    : num_qubits_(num_qubits), fock_(fock), amplitudes_(std::move(amplitudes))
{
    if (num_qubits != 1 && num_qubits != 2)
        throw InvalidParameter("only one or two qubits are supported");
    if (amplitudes_.size() != dimension())
        throw InvalidParameter("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                               ", expected " + std::to_string(dimension()));
}

QuantumState QuantumState::basis(std::initializer_list<Spin> spins, int n, FockSpace fock)
{
    const int m = static_cast<int>(spins.size());
    int spin_index = 0;
    for (Spin s : spins)
        spin_index = 2 * spin_index + static_cast<int>(s);
    Vector spin = Vector::Zero(1 << m);
    spin[spin_index] = 1.0;
    return product(spin, n, fock);
}

QuantumState QuantumState::product(const Vector& spin_state, int n, FockSpace fock)
{
    const int m = spin_state.size() == 2 ? 1 : spin_state.size() == 4 ? 2 : 0;
    if (m == 0)
        throw InvalidParameter("spin state must have length 2 or 4");
    if (n < 0 || n >= fock.cutoff())
        throw InvalidParameter("Fock level " + std::to_string(n) + " outside the truncated basis");
    const double norm = spin_state.norm();
    if (!(norm > 0.0))
        throw InvalidParameter("spin state has zero norm");
    Vector amps = Vector::Zero((1 << m) * fock.cutoff());
    for (int s = 0; s < (1 << m); ++s)
        amps[s * fock.cutoff() + n] = spin_state[s] / norm;
    return QuantumState(m, fock, std::move(amps));
}

QuantumState QuantumState::normalized() const
{
    return QuantumState(num_qubits_, fock_, amplitudes_ / amplitudes_.norm());
}

double QuantumState::spin_population(int spin_index) const
{
    return amplitudes_.segment(index(spin_index, 0), fock_.cutoff()).squaredNorm();
}

RealVector QuantumState::fock_populations() const
{
    RealVector pops = RealVector::Zero(fock_.cutoff());
    for (int s = 0; s < spin_dimension(); ++s)
        for (int n = 0; n < fock_.cutoff(); ++n)
            pops[n] += std::norm(amplitude(s, n));
    return pops;
}

double QuantumState::leakage() const
{
    const int c = fock_.cutoff();
    double total = 0.0;
    for (int s = 0; s < spin_dimension(); ++s)
        total += std::norm(amplitude(s, c - 1)) + std::norm(amplitude(s, c - 2));
    return total;
}

SpinDensityMatrix::SpinDensityMatrix(Matrix entries) : entries_(std::move(entries))
{
    const auto dim = entries_.rows();
    if (entries_.cols() != dim || (dim != 2 && dim != 4))
        throw InvalidParameter("spin density matrix must be 2x2 or 4x4");
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10)
        throw InvalidParameter("spin density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > 1e-10)
        throw InvalidParameter("spin density matrix trace is " + std::to_string(tr.real()));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-9)
        throw InvalidParameter("spin density matrix is not positive semidefinite");
}

SpinDensityMatrix SpinDensityMatrix::pure(const Vector& spin_state)
{
    const Vector psi = spin_state / spin_state.norm();
    return SpinDensityMatrix(psi * psi.adjoint());
}

double SpinDensityMatrix::purity() const
{
    return (entries_ * entries_).trace().real();
}

HermitianGenerator::HermitianGenerator(Matrix entries)
    : entries_(std::move(entries)), id_(next_generator_id.fetch_add(1))
{
    if (entries_.rows() != entries_.cols())
        throw InvalidParameter("generator must be square");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidParameter("generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_);
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

Matrix unitary_exp(const HermitianGenerator& gen, double scale)
{
    Vector phases(gen.dimension());
    for (int i = 0; i < gen.dimension(); ++i)
        phases[i] = std::polar(1.0, -scale * gen.eigenvalues()[i]);
    const Matrix& v = gen.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

const Matrix& UnitaryCache::get(const HermitianGenerator& gen, double scale)
{
    const auto key = std::make_pair(gen.id(), scale);
    {
        std::shared_lock lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end())
            return it->second;
    }
    Matrix u = unitary_exp(gen, scale);
    std::unique_lock lock(mutex_);
    return entries_.try_emplace(key, std::move(u)).first->second;
}

std::size_t UnitaryCache::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

Matrix annihilation(const FockSpace& fock)
{
    const int c = fock.cutoff();
    Matrix a = Matrix::Zero(c, c);
    for (int n = 1; n < c; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix creation(const FockSpace& fock)
{
    return annihilation(fock).adjoint();
}

Matrix number_operator(const FockSpace& fock)
{
    Matrix n = Matrix::Zero(fock.cutoff(), fock.cutoff());
    for (int i = 0; i < fock.cutoff(); ++i)
        n(i, i) = static_cast<double>(i);
    return n;
}

Matrix sigma_plus()
{
    Matrix s = Matrix::Zero(2, 2);
    s(1, 0) = 1.0;
    return s;
}

Matrix sigma_minus()
{
    return sigma_plus().adjoint();
}

Matrix sigma_x()
{
    return sigma_plus() + sigma_minus();
}

Matrix sigma_y()
{
    return Complex(0.0, -1.0) * (sigma_plus() - sigma_minus());
}

Matrix sigma_z()
{
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = -1.0;
    s(1, 1) = 1.0;
    return s;
}

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix spin_operator(const Matrix& op, int ion, int num_qubits)
{
    if (ion < 0 || ion >= num_qubits)
        throw InvalidParameter("ion index out of range");
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < num_qubits; ++i)
        out = kron(out, i == ion ? op : Matrix::Identity(2, 2));
    return out;
}

double coherent_tail(double mean_phonons, int level)
{
    if (level <= 0)
        return 1.0;
    if (mean_phonons <= 0.0)
        return 0.0;
    // 1 - sum_{n<level} Poisson(n); accumulate from the head in log space.
    double head = 0.0;
    double log_term = -mean_phonons;
    for (int n = 0; n < level; ++n) {
        head += std::exp(log_term);
        log_term += std::log(mean_phonons) - std::log(static_cast<double>(n + 1));
    }
    const double tail = 1.0 - head;
    if (tail > 1e-8)
        return tail;
    // Cancellation: sum the tail directly.
    double sum = 0.0;
    for (int n = level; n < level + 400; ++n) {
        const double term = std::exp(log_term);
        sum += term;
        if (term < 1e-30 * sum)
            break;
        log_term += std::log(mean_phonons) - std::log(static_cast<double>(n + 1));
    }
    return sum;
}

Matrix displacement_operator(Complex alpha, const FockSpace& fock, Warnings* warnings)
{
    const int c = fock.cutoff();
    const double mean = std::norm(alpha);
    if (mean > c / 4.0) {
        std::ostringstream msg;
        msg << "displacement |alpha|^2 = " << mean << " exceeds cutoff/4 = " << c / 4.0;
        warn(warnings, msg.str());
    }
    const double leak = coherent_tail(mean, c - 2);
    if (leak > kLeakageLimit) {
        std::ostringstream msg;
        msg << "cutoff " << c << " too small for displacement |alpha| = " << std::abs(alpha)
            << " (top-level population " << leak << ")";
        throw CutoffTooSmall(msg.str(), leak);
    }
    if (alpha == Complex(0.0, 0.0))
        return Matrix::Identity(c, c);
    // alpha a^dag - alpha^* a = -i H with H = i (alpha a^dag - alpha^* a).
    const Matrix a = annihilation(fock);
    const Matrix h = Complex(0.0, 1.0) * (alpha * a.adjoint() - std::conj(alpha) * a);
    return unitary_exp(HermitianGenerator(0.5 * (h + h.adjoint())), 1.0);
}

RealVector thermal_population(double nbar, const FockSpace& fock)
{
    if (!(nbar >= 0.0))
        throw InvalidParameter("mean phonon number must be >= 0");
    const int c = fock.cutoff();
    RealVector p = RealVector::Zero(c);
    if (nbar == 0.0) {
        p[0] = 1.0;
        return p;
    }
    const double ratio = nbar / (nbar + 1.0);
    const double tail = std::pow(ratio, c);
    if (tail > 1e-4) {
        std::ostringstream msg;
        msg << "cutoff " << c << " discards " << tail << " of a thermal state with nbar = " << nbar;
        throw CutoffTooSmall(msg.str(), tail);
    }
    double term = 1.0 / (nbar + 1.0);
    for (int n = 0; n < c; ++n) {
        p[n] = term;
        term *= ratio;
    }
    return p / p.sum();
}

SpinDensityMatrix partial_trace_motion(const QuantumState& state)
{
    const int d = state.spin_dimension();
    const int c = state.fock().cutoff();
    Matrix rho = Matrix::Zero(d, d);
    for (int s = 0; s < d; ++s)
        for (int t = 0; t < d; ++t) {
            Complex sum = 0.0;
            for (int n = 0; n < c; ++n)
                sum += state.amplitude(s, n) * std::conj(state.amplitude(t, n));
            rho(s, t) = sum;
        }
    // Enforce exact Hermiticity against rounding.
    return SpinDensityMatrix(0.5 * (rho + rho.adjoint()));
}

double unitarity_defect(const Matrix& u)
{
    return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace combtrap
