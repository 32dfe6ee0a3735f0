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

#include "mpbs/presets.hpp"

#include "mpbs/angles.hpp"

namespace mpbs {

const CoefficientPreset& on_resonance_preset() {
  static const CoefficientPreset preset{
      "fig3a",
      {0.025, 0.030, 0.025, 0.035, 0.0},
      0.118,
      0.167,
      0.05,
      "On-resonance (theta+ = 0, antibunching): t^2=0.025, r^2=0.030, tau^2=0.025, "
      "rho^2=0.035, g2_m(0)=0.118, p1=0.167; "
      "highlighted probe intensity |alpha|^2=0.05."};
  return preset;
}

const CoefficientPreset& off_resonance_preset() {
  static const CoefficientPreset preset{
      "fig3b",
      {0.108, 0.489, 0.017, 0.045, kPi},
      0.170,
      0.172,
      0.5,
      "Far off-resonance (theta+ = pi, bunching): t^2=0.108, r^2=0.489, tau^2=0.017, "
      "rho^2=0.045, g2_m(0)=0.170, p1=0.172; "
      "highlighted probe intensity |alpha|^2=0.5."};
  return preset;
}

const std::vector<FringePreset>& fringe_presets() {
  static const std::vector<FringePreset> presets{
      {"fig2a", 10.0, 0.0, 0.0, 1.0,
       "OD=10, Delta=0 MHz: correlated light and magnon fringes, theta+ = 0."},
      {"fig2b", 30.0, -10.0, kPi / 2, 1.0,
       "OD=30, Delta=-10 MHz: quadrature fringes, theta+ = pi/2."},
      {"fig2c", 30.0, -50.0, kPi, 1.0,
       "OD=30, Delta=-50 MHz: complementary fringes, theta+ = pi."},
  };
  return presets;
}

std::optional<CoefficientPreset> find_coefficient_preset(std::string_view name) {
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    if (p->name == name) return *p;
  }
  return std::nullopt;
}

std::optional<FringePreset> find_fringe_preset(std::string_view name) {
  for (const auto& p : fringe_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

}  // namespace mpbs
