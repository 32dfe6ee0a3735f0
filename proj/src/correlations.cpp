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

#include "mpbs/correlations.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "mpbs/errors.hpp"

namespace mpbs {

CoincidenceTerms coincidence_terms(const InputState& a, const InputState& b, const BsMatrix& m,
                                   const WavepacketModel& wavepacket,
                                   MomentConvention convention) {
  if (a.is_vacuum() || b.is_vacuum()) throw VacuumPort("g2 needs both ports fed");
  const double t = m.t(), r = m.r(), tau = m.tau(), rho = m.rho();
  const double theta_plus = m.phases().theta_plus;  // throws on degenerate channels
  const FourthOrderMoments mo = moments(a, b, convention);

  CoincidenceTerms g;
  g.self_a = t * t * r * r * mo.self_a;
  g.self_b = rho * rho * tau * tau * mo.self_b;
  g.classical = t * t * tau * tau * mo.cross_ab + r * r * rho * rho * mo.cross_ba;
  // e^{-i theta+} <b^dag a^dag b a> + e^{+i theta+} <a^dag b^dag a b>; both
  // moments are real for phase-averaged product inputs.
  g.quantum = std::cos(theta_plus) * r * t * tau * rho *
              (mo.interference_ba + mo.interference_ab) * wavepacket.overlap();
  return g;
}

double g2_analytic(const InputState& a, const InputState& b, const BsMatrix& m,
                   const WavepacketModel& wavepacket, MomentConvention convention) {
  const auto terms = coincidence_terms(a, b, m, wavepacket, convention);
  if (!(terms.reference() > 0.0)) throw DegenerateChannel("reference coincidences vanish");
  return terms.g2();
}

double MixedDenominator::minimiser() const { return std::sqrt(b / a); }

MixedDenominator mixed_denominator(const Coefficients& k, double p1, double g2m) {
  if (!(p1 > 0.0)) throw InvalidConfig("p1 must be > 0");
  const double p2 = 0.5 * g2m * p1 * p1;
  const double p0 = 1.0 - p1 - p2;
  if (p0 < 0.0) throw InvalidConfig("p1 and g2m imply a negative vacuum probability");
  MixedDenominator d;
  d.a = k.t2 * k.r2 * p0 / p1;
  d.b = k.tau2 * k.rho2 * g2m * p1;
  d.c = k.t2 * k.tau2 + k.r2 * k.rho2;
  return d;
}

double g2_mixed(const Coefficients& k, double alpha2, double p1, double g2m) {
  if (!(alpha2 > 0.0)) throw InvalidConfig("|alpha|^2 must be > 0");
  if (std::min({k.t2, k.r2, k.tau2, k.rho2}) < kDegenerateMagnitude * kDegenerateMagnitude) {
    throw DegenerateChannel("channel magnitude vanishes");
  }
  const double rt_tau_rho = std::sqrt(k.t2 * k.r2 * k.tau2 * k.rho2);
  return 1.0 + 2.0 * std::cos(k.theta_plus) * rt_tau_rho / mixed_denominator(k, p1, g2m)(alpha2);
}

G2Range splitting_ratio_g2(double s1, double s2, SourceKind kind, double theta_plus) {
  if (!(s1 > 0.0) || !(s2 > 0.0)) throw InvalidConfig("splitting ratios must be > 0");
  const double s = s1 * s2;
  const double c = std::cos(theta_plus);
  const double single = 1.0 + 2.0 * c * s / (1.0 + s * s);
  const double coherent = 1.0 + 2.0 * c * s / ((1.0 + s) * (1.0 + s));
  switch (kind) {
    case SourceKind::SingleParticle:
      return {single, single};
    case SourceKind::Coherent:
      return {std::min(1.0, coherent), std::max(1.0, coherent)};
    case SourceKind::Mixed:
      return {std::min(single, coherent), std::max(single, coherent)};
  }
  return {};
}

double visibility(double g2) {
  if (!(g2 >= 0.0)) throw PreconditionViolation(fmt::format("g2 must be >= 0, got {}", g2));
  return std::abs(1.0 - g2);
}

std::vector<double> g2_mixed_crossings(const Coefficients& k, double p1, double g2m, double level,
                                       double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) throw InvalidConfig("invalid crossing scan");
  const auto f = [&](double a2) { return g2_mixed(k, a2, p1, g2m) - level; };
  std::vector<double> out;
  const double ratio = std::pow(hi / lo, 1.0 / (points - 1));
  double x0 = lo;
  double f0 = f(x0);
  for (int i = 1; i < points; ++i) {
    const double x1 = i == points - 1 ? hi : lo * std::pow(ratio, i);
    const double f1 = f(x1);
    if (f0 == 0.0) {
      out.push_back(x0);
    } else if (f0 * f1 < 0.0) {
      boost::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::toms748_solve(
          f, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(50), iters);
      out.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) out.push_back(x0);
  return out;
}

}  // namespace mpbs
