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

#include <vector>

#include "mpbs/beamsplitter.hpp"
#include "mpbs/fock.hpp"
#include "mpbs/states.hpp"

namespace mpbs {

/// The four contributions to the zero-delay coincidence rate.
struct CoincidenceTerms {
  double self_a = 0.0;     ///< t^2 r^2 <a^dag a^dag a a>
  double self_b = 0.0;     ///< rho^2 tau^2 <b^dag b^dag b b>
  double classical = 0.0;  ///< (t^2 tau^2 + r^2 rho^2) <n_a><n_b>
  double quantum = 0.0;    ///< 2 cos(theta_plus) r t tau rho <n_a><n_b> O

  double reference() const { return self_a + self_b + classical; }
  double g2() const { return 1.0 + quantum / reference(); }
};

/// Throws DegenerateChannel if any channel magnitude is below 1e-12 and
/// VacuumPort if either input is vacuum.
CoincidenceTerms coincidence_terms(const InputState& a, const InputState& b, const BsMatrix& m,
                                   const WavepacketModel& wavepacket = WavepacketModel::identical(),
                                   MomentConvention convention = MomentConvention::Exact);

/// g2(0) = 1 + G_q / (G_a + G_b + G_c).
double g2_analytic(const InputState& a, const InputState& b, const BsMatrix& m,
                   const WavepacketModel& wavepacket = WavepacketModel::identical(),
                   MomentConvention convention = MomentConvention::Exact);

/// Intensity coefficients of the beamsplitter plus the phase sum.
struct Coefficients {
  double t2 = 0.0;
  double r2 = 0.0;
  double tau2 = 0.0;
  double rho2 = 0.0;
  double theta_plus = 0.0;

  BsMatrix matrix() const { return BsMatrix::from_intensities(t2, r2, tau2, rho2, theta_plus); }
};

/// Denominator of the coherent + nonideal-magnon g2 after dividing by the
/// cross moment: A |alpha|^2 + B / |alpha|^2 + C.
struct MixedDenominator {
  double a = 0.0;  ///< t^2 r^2 p0 / p1
  double b = 0.0;  ///< tau^2 rho^2 g2m p1
  double c = 0.0;  ///< t^2 tau^2 + r^2 rho^2

  double operator()(double alpha2) const { return a * alpha2 + b / alpha2 + c; }
  /// Stationary point sqrt(B / A).
  double minimiser() const;
};

MixedDenominator mixed_denominator(const Coefficients& k, double p1, double g2m);

/// Closed form for a coherent probe against a nonideal magnon characterised by
/// (p1, g2m), with p0 = 1 - p1 - g2m p1^2 / 2:
///   1 + 2 cos(theta_plus) r t tau rho / (A |alpha|^2 + B / |alpha|^2 + C).
double g2_mixed(const Coefficients& k, double alpha2, double p1, double g2m);

/// |alpha|^2 values in [lo, hi] where g2_mixed crosses the level, from a
/// log-spaced scan refined by bracketing.
std::vector<double> g2_mixed_crossings(const Coefficients& k, double p1, double g2m, double level,
                                       double lo = 1e-3, double hi = 1.0, int points = 2000);

enum class SourceKind { SingleParticle, Coherent, Mixed };

/// Admissible g2 range for splitting ratios s1 = t/r, s2 = tau/rho. A point
/// value has lower == upper.
struct G2Range {
  double lower = 0.0;
  double upper = 0.0;
  bool exact() const { return lower == upper; }
};

/// Single particles: 1 + 2 cos(theta) s1 s2 / (1 + s1^2 s2^2) exactly.
/// Balanced coherent inputs: between 1 and 1 + 2 cos(theta) s1 s2 / (1 + s1 s2)^2.
/// Coherent + single: between the coherent bound and the single-particle value.
G2Range splitting_ratio_g2(double s1, double s2, SourceKind kind, double theta_plus);

/// V = |1 - g2|.
double visibility(double g2);

}  // namespace mpbs
