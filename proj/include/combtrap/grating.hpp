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

#include <cmath>
#include <complex>

namespace combtrap {

/// sum_{n=0}^{N-1} exp(i n theta), the N-slit grating amplitude
///   exp(i theta (N-1)/2) sin(N theta/2) / sin(theta/2).
/// The angle is reduced to [-pi, pi] first; when |sin(theta/2)| < 1e-12 the
/// resonance limit N exp(i theta (N-1)/2) is returned. The reduction runs in
/// extended precision: near a resonance an error d in the reduced angle moves
/// the result by about N^2 d.
inline std::complex<double> grating_sum(double theta, long pulses)
{
    if (pulses <= 0)
        return {0.0, 0.0};
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    const long double reduced = std::remainder(static_cast<long double>(theta), two_pi);
    const long double n = static_cast<long double>(pulses);
    const long double arg = reduced * (n - 1.0L) / 2.0L;
    const std::complex<double> phase(static_cast<double>(std::cos(arg)), static_cast<double>(std::sin(arg)));
    const long double s = std::sin(reduced / 2.0L);
    if (std::abs(s) < 1e-12L)
        return static_cast<double>(n) * phase;
    return phase * static_cast<double>(std::sin(n * reduced / 2.0L) / s);
}

}  // namespace combtrap
