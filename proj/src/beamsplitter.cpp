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

#include "mpbs/beamsplitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "mpbs/angles.hpp"
#include "mpbs/errors.hpp"

namespace mpbs {

SingularValues singular_values(const Matrix2c& m) {
  // sigma^2 are the eigenvalues of M^H M: (F +- sqrt(F^2 - 4 |det|^2)) / 2.
  const double frob2 = m.squaredNorm();
  const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = std::max(0.0, frob2 * frob2 - 4.0 * det * det);
  const double s1 = std::sqrt(0.5 * (frob2 + std::sqrt(disc)));
  const double s2 = s1 > 0.0 ? det / s1 : 0.0;
  return {s1, std::min(s2, s1)};
}

BsMatrix::BsMatrix(Complex aa, Complex ab, Complex ba, Complex bb) {
  m_ << aa, ab, ba, bb;
}

BsMatrix BsMatrix::from_components(double t, double r, double tau, double rho, double theta1,
                                   double theta2) {
  return BsMatrix(Complex(t, 0.0), std::polar(rho, theta2), std::polar(r, theta1),
                  Complex(tau, 0.0));
}

BsMatrix BsMatrix::from_intensities(double t2, double r2, double tau2, double rho2,
                                    double theta_plus) {
  if (t2 < 0.0 || r2 < 0.0 || tau2 < 0.0 || rho2 < 0.0) {
    throw InvalidConfig("intensity coefficients must be non-negative");
  }
  return from_components(std::sqrt(t2), std::sqrt(r2), std::sqrt(tau2), std::sqrt(rho2),
                         theta_plus, 0.0);
}

Phases BsMatrix::phases() const {
  if (std::min({t(), r(), tau(), rho()}) < kDegenerateMagnitude) {
    throw DegenerateChannel(fmt::format(
        "phase undefined: channel magnitudes t={:.3g} r={:.3g} tau={:.3g} rho={:.3g}", t(), r(),
        tau(), rho()));
  }
  Phases ph;
  ph.theta1 = fold_angle(std::arg(ba() / bb()));
  ph.theta2 = fold_angle(std::arg(ab() / aa()));
  ph.theta_plus = fold_angle(ph.theta1 + ph.theta2);
  return ph;
}

Complex compute_xi(double delta, double zeta) {
  return std::exp(-zeta / Complex(1.0, delta));
}

BsMatrix build_matrix(const PhysicalParams& p) {
  p.validate();
  const double zeta = p.zeta();
  if (zeta == 0.0) throw ZetaZero();
  const Complex xi = compute_xi(p.delta, zeta);
  const Complex loss = (p.eta / zeta) * (1.0 - xi);
  return BsMatrix(1.0 - loss, -loss, -(1.0 - xi), xi);
}

BsMatrix build_matrix_zeta_limit(const PhysicalParams& p) {
  p.validate();
  const Complex loss = p.eta / Complex(1.0, p.delta);
  return BsMatrix(1.0 - loss, -loss, 0.0, 1.0);
}

double theta_plus_at(const PhysicalParams& p, double zeta) {
  return build_matrix(p.with_zeta(zeta)).phases().theta_plus;
}

namespace {

std::optional<double> phase_mismatch(const PhysicalParams& p, double zeta, double target) {
  try {
    return fold_angle(theta_plus_at(p, zeta) - target);
  } catch (const DegenerateChannel&) {
    return std::nullopt;
  }
}

}  // namespace

double solve_zeta_for_phase(const PhysicalParams& p, double target, const ZetaSearch& search) {
  p.validate();
  if (!(search.zeta_lo > 0.0) || !(search.zeta_hi > search.zeta_lo) || search.scan_points < 2) {
    throw InvalidConfig("invalid zeta search bracket");
  }

  const int n = search.scan_points;
  const double log_lo = std::log(search.zeta_lo);
  const double log_step = (std::log(search.zeta_hi) - log_lo) / (n - 1);
  std::vector<double> zetas(n);
  std::vector<std::optional<double>> mismatch(n);
  double attained_min = std::numeric_limits<double>::infinity();
  double attained_max = -attained_min;
  for (int i = 0; i < n; ++i) {
    zetas[i] = std::exp(log_lo + log_step * i);
    mismatch[i] = phase_mismatch(p, zetas[i], target);
    if (mismatch[i]) {
      const double th = fold_angle(*mismatch[i] + target);
      attained_min = std::min(attained_min, th);
      attained_max = std::max(attained_max, th);
    }
  }
  if (!(target > -kPi && target <= kPi)) {
    throw NoSolution(fmt::format("target {} outside (-pi, pi]", target), attained_min,
                     attained_max);
  }

  const auto accepted = [&](double z) {
    auto f = phase_mismatch(p, z, target);
    return f && std::abs(*f) < search.tolerance;
  };

  for (int i = 0; i < n; ++i) {
    if (!mismatch[i]) continue;
    const double fi = *mismatch[i];
    const bool hit = std::abs(fi) < search.tolerance;
    const bool has_prev = i > 0 && mismatch[i - 1].has_value();
    const double fp = has_prev ? *mismatch[i - 1] : 0.0;
    // A sign change is a root only if the phase is continuous there; a jump
    // of ~2pi in the folded mismatch is a branch wrap, not a crossing.
    const bool crossing =
        has_prev && fp * fi < 0.0 && std::abs(fp) < kPi / 2 && std::abs(fi) < kPi / 2;
    if (!hit && !crossing) continue;
    if (i == 0 || !has_prev) return zetas[i];

    if (crossing) {
      auto f = [&](double z) {
        auto v = phase_mismatch(p, z, target);
        return v ? *v : std::numeric_limits<double>::quiet_NaN();
      };
      boost::uintmax_t max_iter = 200;
      auto [a, b] = boost::math::tools::toms748_solve(
          f, zetas[i - 1], zetas[i], fp, fi, boost::math::tools::eps_tolerance<double>(52),
          max_iter);
      for (double z : {0.5 * (a + b), a, b}) {
        if (accepted(z)) return z;
      }
    }
    // Step-like transition: shrink onto the smallest accepted zeta.
    double lo = zetas[i - 1];
    double hi = zetas[i];
    if (!accepted(hi)) continue;
    for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
      const double mid = 0.5 * (lo + hi);
      (accepted(mid) ? hi : lo) = mid;
    }
    return hi;
  }
  throw NoSolution(fmt::format("theta_plus never reaches {:.6f} for zeta in [{}, {}] "
                               "(attained range [{:.6f}, {:.6f}])",
                               target, search.zeta_lo, search.zeta_hi, attained_min,
                               attained_max),
                   attained_min, attained_max);
}

ZetaApproach nearest_zeta_for_phase(const PhysicalParams& p, double target,
                                    const ZetaSearch& search) {
  p.validate();
  if (!(search.zeta_lo > 0.0) || !(search.zeta_hi > search.zeta_lo) || search.scan_points < 3) {
    throw InvalidConfig("invalid zeta search bracket");
  }
  const int n = search.scan_points;
  const double log_lo = std::log(search.zeta_lo);
  const double log_step = (std::log(search.zeta_hi) - log_lo) / (n - 1);
  const auto miss = [&](double log_z) {
    auto f = phase_mismatch(p, std::exp(log_z), target);
    return f ? std::abs(*f) : std::numeric_limits<double>::infinity();
  };
  int best = -1;
  double best_miss = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double m = miss(log_lo + log_step * i);
    if (m < best_miss) {
      best_miss = m;
      best = i;
    }
  }
  if (best < 0) throw NoSolution("every channel is degenerate on the zeta bracket", 0.0, 0.0);
  const double lo = log_lo + log_step * std::max(best - 1, 0);
  const double hi = log_lo + log_step * std::min(best + 1, n - 1);
  auto [x, m] = boost::math::tools::brent_find_minima(miss, lo, hi, 50);
  if (!(m < best_miss)) {
    x = log_lo + log_step * best;
    m = best_miss;
  }
  const double zeta = std::exp(x);
  return {zeta, theta_plus_at(p, zeta), m};
}

}  // namespace mpbs
