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

#include <optional>
#include <string_view>
#include <vector>

#include "mpbs/correlations.hpp"

namespace mpbs {

/// Measured beamsplitter and magnon-source characterisation for one regime of
/// the coincidence experiment.
struct CoefficientPreset {
  std::string_view name;
  Coefficients coefficients;
  double g2m = 0.0;        ///< magnon self-correlation
  double p1 = 0.0;         ///< single-magnon probability
  double alpha2_dot = 0.0; ///< probe intensity of the highlighted data point
  std::string_view explain;

  InputState magnon() const { return InputState::magnon_from_g2m(p1, g2m); }
};

/// First-order interference regime: optical depth, detuning and target phase sum.
struct FringePreset {
  std::string_view name;
  double eta = 0.0;
  double delta_mhz = 0.0;
  double target_theta_plus = 0.0;
  double tau_p = 1.0;
  std::string_view explain;
};

const CoefficientPreset& on_resonance_preset();
const CoefficientPreset& off_resonance_preset();
const std::vector<FringePreset>& fringe_presets();

std::optional<CoefficientPreset> find_coefficient_preset(std::string_view name);
std::optional<FringePreset> find_fringe_preset(std::string_view name);

}  // namespace mpbs
