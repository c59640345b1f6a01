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
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include <Eigen/Dense>

#include "combtrap/errors.hpp"

namespace combtrap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Population in the top two Fock levels above which a propagated state is
/// rejected.
inline constexpr double kLeakageLimit = 1e-6;

/// Truncated oscillator basis |0>, ..., |cutoff-1>.
class FockSpace {
public:
    explicit FockSpace(int cutoff);
    int cutoff() const noexcept { return cutoff_; }
    bool operator==(const FockSpace&) const = default;

private:
    int cutoff_;
};

enum class Spin : int { down = 0, up = 1 };

/// Joint spin (x) motion amplitudes for one or two ions sharing one mode.
///
/// Basis ordering is spin-major: index = spin_index * cutoff + n, where
/// spin_index packs the ions with ion 0 in the most significant bit and
/// |down> = 0, |up> = 1. Use index() rather than doing this arithmetic by hand.
class QuantumState {
public:
    QuantumState(int num_qubits, FockSpace fock, Vector amplitudes);

    /// |spins> (x) |n>.
    static QuantumState basis(std::initializer_list<Spin> spins, int n, FockSpace fock);
    /// spin_state (x) |n>, spin_state of length 2^m; normalized on construction.
    static QuantumState product(const Vector& spin_state, int n, FockSpace fock);

    int num_qubits() const noexcept { return num_qubits_; }
    const FockSpace& fock() const noexcept { return fock_; }
    int spin_dimension() const noexcept { return 1 << num_qubits_; }
    int dimension() const noexcept { return spin_dimension() * fock_.cutoff(); }
    int index(int spin_index, int n) const noexcept { return spin_index * fock_.cutoff() + n; }

    const Vector& amplitudes() const noexcept { return amplitudes_; }
    Complex amplitude(int spin_index, int n) const { return amplitudes_[index(spin_index, n)]; }

    double norm() const { return amplitudes_.norm(); }
    QuantumState normalized() const;

    /// Probability of the given spin configuration, summed over Fock levels.
    double spin_population(int spin_index) const;
    /// Probability of each Fock level, summed over spins.
    RealVector fock_populations() const;
    /// Population in the top two Fock levels.
    double leakage() const;

private:
    int num_qubits_;
    FockSpace fock_;
    Vector amplitudes_;
};

/// Reduced spin density matrix of one or two ions.
class SpinDensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity.
    explicit SpinDensityMatrix(Matrix entries);

    static SpinDensityMatrix pure(const Vector& spin_state);

    int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
    int num_qubits() const noexcept { return dimension() == 2 ? 1 : 2; }
    const Matrix& entries() const noexcept { return entries_; }
    Complex operator()(int row, int col) const { return entries_(row, col); }
    double population(int spin_index) const { return entries_(spin_index, spin_index).real(); }
    double purity() const;

private:
    Matrix entries_;
};

/// Hermitian matrix together with its eigendecomposition. Immutable; each
/// instance has a process-unique id used as a cache key.
class HermitianGenerator {
public:
    explicit HermitianGenerator(Matrix entries);

    int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const noexcept { return entries_; }
    const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
    const Matrix& eigenvectors() const noexcept { return eigenvectors_; }
    std::uint64_t id() const noexcept { return id_; }

private:
    Matrix entries_;
    RealVector eigenvalues_;
    Matrix eigenvectors_;
    std::uint64_t id_;
};

/// Memo of exp(-i s H) keyed on (generator id, s). Concurrent lookups share a
/// reader lock; insertion takes the writer lock. Entries are never evicted, so
/// returned references stay valid for the cache lifetime.
class UnitaryCache {
public:
    const Matrix& get(const HermitianGenerator& gen, double scale);
    std::size_t size() const;

private:
    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::uint64_t, double>, Matrix> entries_;
};

/// exp(-i * scale * gen) from the eigendecomposition.
Matrix unitary_exp(const HermitianGenerator& gen, double scale);

Matrix annihilation(const FockSpace& fock);
Matrix creation(const FockSpace& fock);
Matrix number_operator(const FockSpace& fock);

/// 2x2 single-spin operators in the (|down>, |up>) basis.
Matrix sigma_plus();   ///< |up><down|
Matrix sigma_minus();  ///< |down><up|
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();      ///< +1 on |up>

Matrix kron(const Matrix& a, const Matrix& b);

/// Places a 2x2 operator on `ion` of an m-ion register.
Matrix spin_operator(const Matrix& op, int ion, int num_qubits);

/// Coherent-state population at Fock levels >= `level` for mean |alpha|^2.
double coherent_tail(double mean_phonons, int level);

/// D(alpha) = exp(alpha a^dag - alpha^* a) in the truncated basis. Throws
/// CutoffTooSmall when D(alpha)|0> would put more than kLeakageLimit in the
/// top two levels; warns when |alpha|^2 > cutoff / 4.
Matrix displacement_operator(Complex alpha, const FockSpace& fock, Warnings* warnings = nullptr);

/// Thermal occupation p_n = nbar^n / (nbar + 1)^(n + 1), renormalized over the
/// truncated basis. Throws CutoffTooSmall if the discarded tail exceeds 1e-4.
RealVector thermal_population(double nbar, const FockSpace& fock);

SpinDensityMatrix partial_trace_motion(const QuantumState& state);

/// max |U^dag U - I|.
double unitarity_defect(const Matrix& u);

}  // namespace combtrap
