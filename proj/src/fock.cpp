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

#include "mpbs/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <fmt/format.h>

#include "mpbs/errors.hpp"

namespace mpbs {

Matrix4c dilate(const BsMatrix& m) {
  const Matrix2c& t = m.entries();
  const SingularValues sv = m.singular_values();
  if (sv.sigma1 > 1.0 + kContractionTolerance) {
    throw NotContraction(
        fmt::format("matrix is not a contraction (sigma1 = {:.12g})", sv.sigma1), sv.sigma1);
  }
  Eigen::JacobiSVD<Matrix2c> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector2d s = svd.singularValues();
  Eigen::Matrix2cd defect = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) defect(i, i) = std::sqrt(std::max(0.0, 1.0 - s(i) * s(i)));
  const Matrix2c& w = svd.matrixU();
  const Matrix2c& v = svd.matrixV();

  Matrix4c u;
  u.topLeftCorner<2, 2>() = t;
  u.topRightCorner<2, 2>() = w * defect * w.adjoint();
  u.bottomLeftCorner<2, 2>() = -(v * defect * v.adjoint());
  u.bottomRightCorner<2, 2>() = t.adjoint();
  return u;
}

double unitarity_defect(const Matrix4c& u) {
  return (u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff();
}

WavepacketModel WavepacketModel::gaussian(double delay, double width) {
  if (!(width > 0.0)) throw InvalidConfig("gaussian wavepacket width must be > 0");
  WavepacketModel w;
  w.shape = Shape::Gaussian;
  w.delay = delay;
  w.width = width;
  return w;
}

WavepacketModel WavepacketModel::with_overlap(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidConfig("overlap must lie in [0, 1]");
  WavepacketModel w;
  w.shape = Shape::Fixed;
  w.fixed = overlap;
  return w;
}

double WavepacketModel::overlap() const {
  switch (shape) {
    case Shape::Identical:
      return 1.0;
    case Shape::Gaussian:
      return std::exp(-delay * delay / (4.0 * width * width));
    case Shape::Fixed:
      return fixed;
  }
  return 1.0;
}

int choose_truncation(const InputState& a, const InputState& b) {
  int nmax = 6;
  while (a.tail_beyond(nmax) >= kCoherentTailBound || b.tail_beyond(nmax) >= kCoherentTailBound) {
    if (++nmax > kMaxTruncation) {
      throw TruncationTooSmall(
          fmt::format("coherent tail needs more than {} quanta (inputs {}, {})", kMaxTruncation,
                      a.describe(), b.describe()));
    }
  }
  return nmax;
}

JointStatistics::JointStatistics(int nmax, int max_photons)
    : nmax_(nmax),
      max_photons_(max_photons),
      p_(static_cast<std::size_t>(max_photons + 1) * (max_photons + 1), 0.0) {}

double JointStatistics::total() const {
  double s = 0.0;
  for (double v : p_) s += v;
  return s;
}

double JointStatistics::mean_c() const {
  double s = 0.0;
  for (int c = 0; c <= max_photons_; ++c)
    for (int d = 0; d <= max_photons_; ++d) s += c * (*this)(c, d);
  return s;
}

double JointStatistics::mean_d() const {
  double s = 0.0;
  for (int c = 0; c <= max_photons_; ++c)
    for (int d = 0; d <= max_photons_; ++d) s += d * (*this)(c, d);
  return s;
}

double JointStatistics::mean_cd() const {
  double s = 0.0;
  for (int c = 1; c <= max_photons_; ++c)
    for (int d = 1; d <= max_photons_; ++d) s += static_cast<double>(c) * d * (*this)(c, d);
  return s;
}

ClickProbabilities JointStatistics::clicks(double efficiency) const {
  ClickProbabilities out;
  const double miss = 1.0 - efficiency;
  for (int c = 0; c <= max_photons_; ++c) {
    const double pc = 1.0 - std::pow(miss, c);
    for (int d = 0; d <= max_photons_; ++d) {
      const double pd = 1.0 - std::pow(miss, d);
      const double w = (*this)(c, d);
      out.c += w * pc;
      out.d += w * pd;
      out.both += w * pc * pd;
    }
  }
  return out;
}

namespace {

/// Output (n_c, n_d) distribution of |n>_0 |m>_1 |0>_2 |0>_3 under u.
struct Sector {
  int photons = 0;
  std::vector<double> p;  ///< (photons+1)^2, row-major in n_c
  double norm = 0.0;
};

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

Sector evolve_fock(const Matrix4c& u, int n, int m) {
  const int total = n + m;
  const int side = total + 1;
  auto idx = [side](int k1, int k2, int k3) {
    return (static_cast<std::size_t>(k1) * side + k2) * side + k3;
  };
  // Coefficients of prod_j (sum_k u(k, j) x_k)^{n_j} over monomials of the
  // current degree; the x_3 exponent is implicit.
  std::vector<Complex> poly(static_cast<std::size_t>(side) * side * side, 0.0);
  std::vector<Complex> next(poly.size(), 0.0);
  poly[idx(0, 0, 0)] = 1.0;
  int degree = 0;
  auto multiply = [&](int col) {
    const Complex u0 = u(0, col), u1 = u(1, col), u2 = u(2, col), u3 = u(3, col);
    ++degree;
    for (int k1 = 0; k1 <= degree; ++k1) {
      for (int k2 = 0; k1 + k2 <= degree; ++k2) {
        for (int k3 = 0; k1 + k2 + k3 <= degree; ++k3) {
          Complex v = 0.0;
          if (k1 + k2 + k3 < degree) v += u3 * poly[idx(k1, k2, k3)];
          if (k1 > 0) v += u0 * poly[idx(k1 - 1, k2, k3)];
          if (k2 > 0) v += u1 * poly[idx(k1, k2 - 1, k3)];
          if (k3 > 0) v += u2 * poly[idx(k1, k2, k3 - 1)];
          next[idx(k1, k2, k3)] = v;
        }
      }
    }
    std::swap(poly, next);
  };
  for (int i = 0; i < n; ++i) multiply(0);
  for (int i = 0; i < m; ++i) multiply(1);

  Sector out;
  out.photons = total;
  out.p.assign(static_cast<std::size_t>(side) * side, 0.0);
  const double log_input = log_factorial(n) + log_factorial(m);
  for (int k1 = 0; k1 <= total; ++k1) {
    for (int k2 = 0; k1 + k2 <= total; ++k2) {
      for (int k3 = 0; k1 + k2 + k3 <= total; ++k3) {
        const int k4 = total - k1 - k2 - k3;
        const double log_scale =
            log_factorial(k1) + log_factorial(k2) + log_factorial(k3) + log_factorial(k4) -
            log_input;
        const double prob = std::norm(poly[idx(k1, k2, k3)]) * std::exp(log_scale);
        out.p[static_cast<std::size_t>(k1) * side + k2] += prob;
        out.norm += prob;
      }
    }
  }
  return out;
}

double binomial(int n, int k) {
  return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

}  // namespace

JointStatistics apply_beamsplitter(const InputState& a, const InputState& b, const BsMatrix& m,
                                   int nmax, const WavepacketModel& wavepacket) {
  const Matrix4c u = dilate(m);
  if (nmax <= 0) {
    nmax = choose_truncation(a, b);
  } else {
    if (nmax < 4) throw TruncationTooSmall(fmt::format("nmax must be >= 4, got {}", nmax));
    if (nmax > kMaxTruncation) {
      throw InvalidConfig(fmt::format("nmax is capped at {}, got {}", kMaxTruncation, nmax));
    }
    for (const auto* s : {&a, &b}) {
      if (s->tail_beyond(nmax) >= kCoherentTailBound) {
        throw TruncationTooSmall(fmt::format("nmax = {} leaves a coherent tail of {:.3g} for {}",
                                             nmax, s->tail_beyond(nmax), s->describe()));
      }
    }
  }
  const double overlap = wavepacket.overlap();
  const auto wa = a.number_distribution(nmax);
  const auto wb = b.number_distribution(nmax);

  JointStatistics stats(nmax, 2 * nmax);
  std::map<std::pair<int, int>, Sector> cache;
  double norm_error = 0.0;
  auto sector = [&](int n, int k) -> const Sector& {
    auto it = cache.find({n, k});
    if (it == cache.end()) {
      it = cache.emplace(std::pair{n, k}, evolve_fock(u, n, k)).first;
      norm_error = std::max(norm_error, std::abs(1.0 - it->second.norm));
    }
    return it->second;
  };

  for (int n = 0; n <= nmax; ++n) {
    if (wa[n] == 0.0) continue;
    for (int k = 0; k <= nmax; ++k) {
      if (wb[k] == 0.0) continue;
      const double weight = wa[n] * wb[k];
      // Port b photons split binomially between the shared temporal submode
      // (j of them) and the orthogonal one (k - j); the two submodes are
      // detected together but never interfere.
      for (int j = 0; j <= k; ++j) {
        const double split = binomial(k, j) * std::pow(overlap, j) * std::pow(1.0 - overlap, k - j);
        if (split == 0.0) continue;
        const Sector& shared = sector(n, j);
        const Sector& other = sector(0, k - j);
        const int sw = shared.photons + 1;
        const int ow = other.photons + 1;
        for (int c1 = 0; c1 < sw; ++c1) {
          for (int d1 = 0; c1 + d1 < sw; ++d1) {
            const double p1 = shared.p[static_cast<std::size_t>(c1) * sw + d1];
            if (p1 == 0.0) continue;
            for (int c2 = 0; c2 < ow; ++c2) {
              for (int d2 = 0; c2 + d2 < ow; ++d2) {
                stats.at(c1 + c2, d1 + d2) +=
                    weight * split * p1 * other.p[static_cast<std::size_t>(c2) * ow + d2];
              }
            }
          }
        }
      }
    }
  }
  const double ta = a.tail_beyond(nmax);
  const double tb = b.tail_beyond(nmax);
  stats.set_truncated_weight(ta + tb - ta * tb);
  stats.set_norm_error(norm_error);
  return stats;
}

OracleG2 g2_oracle(const InputState& a, const InputState& b, const BsMatrix& m, int nmax,
                   const WavepacketModel& wavepacket) {
  if (a.is_vacuum() || b.is_vacuum()) throw VacuumPort("g2 needs both ports fed");
  if (nmax <= 0) nmax = choose_truncation(a, b);
  const auto both = apply_beamsplitter(a, b, m, nmax, wavepacket);
  const auto only_a = apply_beamsplitter(a, InputState::vacuum(), m, nmax);
  const auto only_b = apply_beamsplitter(InputState::vacuum(), b, m, nmax);

  OracleG2 out;
  out.nmax = nmax;
  out.numerator = both.mean_cd();
  out.denominator = only_a.mean_cd() + only_b.mean_cd() + only_a.mean_c() * only_b.mean_d() +
                    only_a.mean_d() * only_b.mean_c();
  if (!(out.denominator > 0.0)) {
    throw DegenerateChannel("distinguishable-reference coincidences vanish");
  }
  out.g2 = out.numerator / out.denominator;
  return out;
}

}  // namespace mpbs
