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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpbs/beamsplitter.hpp"
#include "mpbs/correlations.hpp"
#include "mpbs/counting.hpp"
#include "mpbs/fock.hpp"
#include "mpbs/params.hpp"
#include "mpbs/states.hpp"

namespace mpbs {

/// Physical description of the beamsplitter. Exactly one of zeta, omega_c
/// (via params) or a phase target fixes the drive strength.
struct PhysicalSpec {
  PhysicalParams params;
  std::optional<double> zeta;
  std::optional<double> target_theta_plus;
};

struct DeltaRange {
  double from = 0.0;  ///< gamma13 units
  double to = 0.0;
  int points = 0;
};

struct FringeOptions {
  double m0 = 1.0;
  double alpha = 1.0;
  int points = 64;
  bool use_ode = false;
};

/// Everything a command can consume; exactly one of physical/coefficients.
struct RunConfig {
  std::optional<PhysicalSpec> physical;
  std::optional<Coefficients> coefficients;
  InputState a = InputState::coherent_with_mean(0.05);
  InputState b = InputState::ideal_single();
  WavepacketModel wavepacket;
  int nmax = 0;

  DetectionChain chain;
  std::uint64_t trials = 1'000'000;
  double herald_probability = 1.0;
  AlphaInterpretation interpretation = AlphaInterpretation::PreCollection;

  std::vector<double> alpha2;
  std::optional<DeltaRange> delta_range;
  std::vector<double> times;
  MagnonDecayModel decay;
  FringeOptions fringes;

  std::string preset;
  std::string explain;

  /// Resolves zeta (solving for a phase target if needed) and returns the
  /// physical parameters. Throws InvalidConfig without a physical section.
  PhysicalParams resolved_params() const;
  BsMatrix matrix() const;
  void validate() const;
};

/// Parses a JSON document. Frequencies must carry a unit tag:
///   {"value": -10, "unit": "MHz"} or {"value": -3.3, "unit": "gamma13_units"}.
/// Throws InvalidConfig on malformed or inconsistent input.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::string& path);

/// Converts a tagged frequency to gamma13 units.
double frequency_in_gamma13(double value, std::string_view unit);

/// fig2a|fig2b|fig2c|fig3a|fig3b. Throws InvalidConfig for unknown names.
RunConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace mpbs
