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

namespace mpbs {

/// Atomic and optical knobs of the beamsplitter. Frequencies and rates are
/// dimensionless ratios to the excited-state decay rate gamma13; times are in
/// units of 1/gamma13.
struct PhysicalParams {
  double delta = 0.0;    ///< single-photon detuning / gamma13
  double omega_c = 0.0;  ///< control Rabi frequency / gamma13
  double tau_p = 1.0;    ///< pulse duration * gamma13
  double eta = 1.0;      ///< optical depth
  double gamma12 = 0.0;  ///< ground-state dephasing / gamma13

  /// Drive strength |Omega_c|^2 tau_p / gamma13.
  double zeta() const { return omega_c * omega_c * tau_p; }

  /// Same parameters with omega_c chosen so that zeta() == z (tau_p is kept).
  PhysicalParams with_zeta(double z) const {
    PhysicalParams p = *this;
    p.omega_c = std::sqrt(z / tau_p);
    return p;
  }

  /// The closed-form matrix assumes tau_p << 1/gamma12.
  bool dephasing_negligible() const { return gamma12 * tau_p <= 0.01; }

  /// Throws InvalidConfig when an invariant is violated.
  void validate() const;
};

/// gamma13 = 2 pi * 3 MHz; detunings quoted in MHz use the same 2 pi convention.
inline constexpr double kGamma13MHz = 3.0;

inline double mhz_to_gamma13_units(double mhz) { return mhz / kGamma13MHz; }

}  // namespace mpbs
