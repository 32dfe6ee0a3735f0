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

#include "mpbs/params.hpp"

#include <fmt/format.h>

#include "mpbs/errors.hpp"

namespace mpbs {

void PhysicalParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(delta) || !finite(omega_c) || !finite(tau_p) || !finite(eta) || !finite(gamma12)) {
    throw InvalidConfig("physical parameters must be finite");
  }
  if (eta <= 0.0) throw InvalidConfig(fmt::format("optical depth must be > 0, got {}", eta));
  if (tau_p <= 0.0) throw InvalidConfig(fmt::format("tau_p must be > 0, got {}", tau_p));
  if (omega_c < 0.0) throw InvalidConfig(fmt::format("omega_c must be >= 0, got {}", omega_c));
  if (gamma12 < 0.0) throw InvalidConfig(fmt::format("gamma12 must be >= 0, got {}", gamma12));
}

}  // namespace mpbs
