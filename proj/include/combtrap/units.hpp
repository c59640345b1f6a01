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

#include <numbers>

namespace combtrap {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// User-facing quantities are ordinary frequencies in Hz; the physics is done
// in rad/s. Every conversion goes through these two helpers.
constexpr double to_angular(double hz) { return kTwoPi * hz; }
constexpr double to_hertz(double rad_per_s) { return rad_per_s / kTwoPi; }

}  // namespace combtrap
