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

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "combtrap/hilbert.hpp"
#include "test_util.hpp"

namespace combtrap {
namespace {

using testing::max_abs;

// exp(-i s H) by Taylor series with scaling and squaring.
Matrix taylor_exp(const Matrix& h, double s)
{
    int squarings = 0;
    double norm = std::abs(s) * h.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm /= 2.0;
        ++squarings;
    }
    const Matrix x = Complex(0.0, -s / std::pow(2.0, squarings)) * h;
    Matrix term = Matrix::Identity(h.rows(), h.cols());
    Matrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i)
        sum = sum * sum;
    return sum;
}

TEST(Fock, LadderOperators)
{
    const FockSpace fock(8);
    const Matrix a = annihilation(fock);
    for (int n = 1; n < 8; ++n)
        EXPECT_NEAR(std::abs(a(n - 1, n) - std::sqrt(static_cast<double>(n))), 0.0, 1e-15);
    const Matrix comm = a * creation(fock) - creation(fock) * a;
    for (int n = 0; n < 7; ++n)
        EXPECT_NEAR(comm(n, n).real(), 1.0, 1e-14);
    EXPECT_NEAR(max_abs(creation(fock) * a - number_operator(fock)), 0.0, 1e-14);
    EXPECT_THROW(FockSpace(1), InvalidParameter);
}

TEST(Spin, Conventions)
{
    Vector down(2);
    down << 1.0, 0.0;
    const Vector up = sigma_plus() * down;
    EXPECT_NEAR(std::abs(up[1] - 1.0), 0.0, 1e-15);
    EXPECT_NEAR((sigma_z() * up - up).norm(), 0.0, 1e-15);
    EXPECT_NEAR(max_abs(sigma_x() - (sigma_plus() + sigma_minus())), 0.0, 1e-15);
    EXPECT_NEAR(max_abs(sigma_x() * sigma_y() - Complex(0.0, 1.0) * sigma_z()), 0.0, 1e-15);
    // Ion 0 is the most significant bit.
    const Matrix x0 = spin_operator(sigma_x(), 0, 2);
    EXPECT_NEAR(std::abs(x0(2, 0) - 1.0), 0.0, 1e-15);
}

TEST(State, IndexingAndPopulations)
{
    const FockSpace fock(5);
    const auto s = QuantumState::basis({Spin::up, Spin::down}, 3, fock);
    EXPECT_EQ(s.dimension(), 20);
    EXPECT_NEAR(std::abs(s.amplitude(2, 3)), 1.0, 1e-15);
    EXPECT_NEAR(s.spin_population(2), 1.0, 1e-15);
    EXPECT_NEAR(s.fock_populations()[3], 1.0, 1e-15);
    EXPECT_NEAR(s.leakage(), 1.0, 1e-15);
    EXPECT_NEAR(QuantumState::basis({Spin::down}, 2, fock).leakage(), 0.0, 1e-15);
}

TEST(Displacement, MatchesCoherentStateSeries)
{
    const FockSpace fock(30);
    const Complex alpha(0.5, 0.3);
    const Matrix d = displacement_operator(alpha, fock);
    double log_fact = 0.0;
    for (int n = 0; n < 20; ++n) {
        if (n > 0)
            log_fact += std::log(static_cast<double>(n));
        const Complex oracle = std::exp(-std::norm(alpha) / 2.0) * std::pow(alpha, n) * std::exp(-0.5 * log_fact);
        EXPECT_NEAR(std::abs(d(n, 0) - oracle), 0.0, 1e-10) << "n = " << n;
    }
}

TEST(Displacement, UnitaryAndComposes)
{
    const FockSpace fock(60);
    for (int trial = 0; trial < 10; ++trial) {
        const Complex a(testing::uniform(-1.5, 1.5), testing::uniform(-1.5, 1.5));
        const Complex b(testing::uniform(-1.5, 1.5), testing::uniform(-1.5, 1.5));
        const Matrix da = displacement_operator(a, fock);
        const Matrix db = displacement_operator(b, fock);
        EXPECT_LT(unitarity_defect(da), 1e-8);
        // D(a) D(b) = exp(i Im(a b^*)) D(a + b), checked on low-lying states.
        const Matrix lhs = da * db;
        const Matrix rhs = std::polar(1.0, std::imag(a * std::conj(b))) * displacement_operator(a + b, fock);
        EXPECT_LT(max_abs((lhs - rhs).leftCols(5)), 1e-6);
    }
}

TEST(Displacement, CutoffGuards)
{
    const FockSpace fock(40);
    Warnings w;
    displacement_operator(std::sqrt(11.0), fock, &w);
    EXPECT_EQ(w.messages.size(), 1u);
    EXPECT_THROW(displacement_operator(5.0, fock), CutoffTooSmall);
}

TEST(CoherentTail, MatchesPoissonSum)
{
    for (double mean : {0.5, 3.0, 11.0}) {
        for (int level : {1, 5, 20}) {
            double head = 0.0, term = std::exp(-mean);
            for (int n = 0; n < level; ++n) {
                head += term;
                term *= mean / (n + 1);
            }
            EXPECT_NEAR(coherent_tail(mean, level), 1.0 - head, 1e-12);
        }
    }
    EXPECT_GT(coherent_tail(1.0, 40), 0.0);
    EXPECT_LT(coherent_tail(1.0, 40), 1e-40);
}

TEST(Thermal, GeometricSeriesMean)
{
    for (double nbar : {0.0, 0.03, 1.0, 6.0, 10.0}) {
        const FockSpace fock(160);
        const RealVector p = thermal_population(nbar, fock);
        double mean = 0.0;
        for (int n = 0; n < fock.cutoff(); ++n)
            mean += n * p[n];
        // Mean of a geometric distribution truncated to c levels.
        const double r = nbar / (nbar + 1.0);
        const int c = fock.cutoff();
        const double oracle = nbar == 0.0 ? 0.0 : r / (1.0 - r) - c * std::pow(r, c) / (1.0 - std::pow(r, c));
        EXPECT_NEAR(p.sum(), 1.0, 1e-12);
        EXPECT_NEAR(mean, oracle, 1e-10 * (1.0 + nbar));
        EXPECT_NEAR(mean, nbar, 1e-4 * (1.0 + nbar));
    }
    EXPECT_THROW(thermal_population(10.0, FockSpace(80)), CutoffTooSmall);
    EXPECT_NO_THROW(thermal_population(10.0, FockSpace(120)));
}

TEST(DensityMatrix, PurityOfRandomStates)
{
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = trial % 2 ? 2 : 4;
        EXPECT_NEAR(SpinDensityMatrix::pure(testing::random_state(dim)).purity(), 1.0, 1e-12);
        const SpinDensityMatrix mixed(testing::random_density(dim));
        EXPECT_LT(mixed.purity(), 1.0);
        EXPECT_GE(mixed.purity(), 1.0 / dim - 1e-12);
    }
}

TEST(DensityMatrix, RejectsInvalid)
{
    Matrix m = Matrix::Identity(2, 2);
    EXPECT_THROW(SpinDensityMatrix{m}, InvalidParameter);
    m *= 0.5;
    m(0, 1) = 0.1;
    EXPECT_THROW(SpinDensityMatrix{m}, InvalidParameter);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(SpinDensityMatrix{neg}, InvalidParameter);
}

TEST(PartialTrace, ProductAndEntangled)
{
    const FockSpace fock(6);
    const Vector spin = testing::random_state(4);
    const auto product = partial_trace_motion(QuantumState::product(spin, 2, fock));
    EXPECT_LT(max_abs(product.entries() - spin * spin.adjoint()), 1e-12);

    Vector amps = Vector::Zero(12);
    amps[0] = 1.0 / std::sqrt(2.0);      // |down, 0>
    amps[6 + 1] = 1.0 / std::sqrt(2.0);  // |up, 1>
    const auto mixed = partial_trace_motion(QuantumState(1, fock, amps));
    EXPECT_NEAR(mixed.purity(), 0.5, 1e-12);
}

TEST(Unitary, RandomHermitianGenerators)
{
    for (int dim : {2, 8, 40, 80}) {
        const HermitianGenerator gen(testing::random_hermitian(dim));
        const double s = testing::uniform(-2.0, 2.0);
        const Matrix u = unitary_exp(gen, s);
        EXPECT_LT(unitarity_defect(u), 1e-8) << dim;
        EXPECT_LT(max_abs(u - taylor_exp(gen.entries(), s)), 1e-9) << dim;
    }
    Matrix bad = testing::random_hermitian(3);
    bad(0, 1) += 0.5;
    EXPECT_THROW(HermitianGenerator{bad}, InvalidParameter);
}

TEST(Unitary, CacheSharedAcrossThreads)
{
    UnitaryCache cache;
    const HermitianGenerator gen(testing::random_hermitian(6));
    const Matrix expected = unitary_exp(gen, 0.7);
    std::vector<std::jthread> workers;
    std::vector<double> errors(8, 1.0);
    for (int t = 0; t < 8; ++t)
        workers.emplace_back([&, t] {
            for (int k = 0; k < 50; ++k)
                errors[t] = max_abs(cache.get(gen, 0.7) - expected);
        });
    workers.clear();
    EXPECT_EQ(cache.size(), 1u);
    for (double e : errors)
        EXPECT_EQ(e, 0.0);
    EXPECT_EQ(&cache.get(gen, 0.7), &cache.get(gen, 0.7));
}

}  // namespace
}  // namespace combtrap
