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

// Shared fixtures for the unit tests: seeded generators and the reference
// ion/laser parameters.

#pragma once

#include <cmath>
#include <random>

#include "combtrap/comb.hpp"
#include "combtrap/hilbert.hpp"

namespace combtrap::testing {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20260416);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline int uniform_int(int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng());
}

inline Complex gaussian_complex()
{
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(rng()), n(rng())};
}

inline Vector random_state(int dim)
{
    Vector v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = gaussian_complex();
    return v / v.norm();
}

inline Matrix random_hermitian(int dim)
{
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = gaussian_complex();
    return 0.5 * (m + m.adjoint());
}

/// Random mixed state from a Ginibre matrix.
inline Matrix random_density(int dim)
{
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = gaussian_complex();
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline IonSpec reference_ion()
{
    IonSpec ion;
    ion.qubit_splitting_hz = 12.6428e9;
    ion.detuning_hz = 9e12;
    ion.linewidth_hz = 19.6e6;
    ion.saturation_intensity = 0.15;
    ion.modes = {TrapMode{1.64e6, 0.1}};
    return ion;
}

inline PulseTrainSpec reference_laser(int pick = 1)
{
    PulseTrainSpec spec;
    spec.carrier_frequency_hz = 8.444858e14;
    spec.rep_rate_hz = 80.78e6;
    spec.pulse_duration_s = 1e-12;
    spec.pick_divisor = pick;
    spec.intensity_ratio = 500.0 / 0.15;
    return spec;
}

inline double max_abs(const Matrix& m)
{
    return m.cwiseAbs().maxCoeff();
}

}  // namespace combtrap::testing
