// Copyright 2026 The mpbs Authors
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
#include <numbers>

namespace mpbs {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Folds an angle into (-pi, pi].
inline double fold_angle(double x) {
  double y = std::remainder(x, kTwoPi);  // [-pi, pi]
  if (y <= -kPi) y += kTwoPi;
  return y;
}

/// Shortest distance between two angles on the circle, in [0, pi].
inline double angular_distance(double a, double b) { return std::abs(fold_angle(a - b)); }

}  // namespace mpbs
