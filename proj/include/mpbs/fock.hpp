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

#include <Eigen/Dense>

#include "mpbs/beamsplitter.hpp"
#include "mpbs/states.hpp"

namespace mpbs {

using Matrix4c = Eigen::Matrix4cd;

/// Embeds a contraction T as the top-left block of the 4x4 unitary
///   [[ T,    (I - T T^dag)^{1/2} ],
///    [ -(I - T^dag T)^{1/2},  T^dag ]]
/// built from the SVD of T. Modes 0,1 are the signal ports, 2,3 loss ancillas.
/// Throws NotContraction if sigma1 > 1 + kContractionTolerance.
Matrix4c dilate(const BsMatrix& m);

/// max |U^dag U - I| entry.
double unitarity_defect(const Matrix4c& u);

/// Temporal overlap between the two input wavepackets.
struct WavepacketModel {
  enum class Shape { Identical, Gaussian, Fixed };

  Shape shape = Shape::Identical;
  double delay = 0.0;  ///< Gaussian: arrival-time difference
  double width = 1.0;  ///< Gaussian: rms width of |h(t)|^2
  double fixed = 1.0;  ///< Fixed: the overlap itself

  static WavepacketModel identical() { return {}; }
  static WavepacketModel gaussian(double delay, double width);
  static WavepacketModel with_overlap(double overlap);

  /// |<h_a|h_b>|^2 in [0, 1]; exp(-delay^2 / (4 width^2)) for Gaussians.
  double overlap() const;
};

/// Caps the Fock truncation so memory stays O(nmax^4).
inline constexpr int kMaxTruncation = 16;
inline constexpr double kCoherentTailBound = 1e-10;

/// max(6, smallest n with coherent tail < 1e-10) over both ports.
/// Throws TruncationTooSmall when that exceeds kMaxTruncation.
int choose_truncation(const InputState& a, const InputState& b);

struct ClickProbabilities {
  double c = 0.0;     ///< P(click at c)
  double d = 0.0;     ///< P(click at d)
  double both = 0.0;  ///< P(click at c and d)
};

/// Number-resolved joint statistics of the two signal outputs (c, d), loss
/// ancillas traced out.
class JointStatistics {
 public:
  JointStatistics() = default;
  JointStatistics(int nmax, int max_photons);

  int nmax() const { return nmax_; }
  int max_photons() const { return max_photons_; }

  double operator()(int nc, int nd) const { return p_[index(nc, nd)]; }
  double& at(int nc, int nd) { return p_[index(nc, nd)]; }
  const std::vector<double>& data() const { return p_; }

  double total() const;
  /// Input probability mass lost to truncation.
  double truncated_weight() const { return truncated_weight_; }
  /// max |1 - ||U psi||^2| over evolved input components before tracing.
  double norm_error() const { return norm_error_; }

  double mean_c() const;
  double mean_d() const;
  double mean_cd() const;

  /// Threshold detectors with per-quantum efficiency and no dark counts.
  ClickProbabilities clicks(double efficiency) const;

  void set_truncated_weight(double w) { truncated_weight_ = w; }
  void set_norm_error(double e) { norm_error_ = e; }

 private:
  std::size_t index(int nc, int nd) const {
    return static_cast<std::size_t>(nc) * (max_photons_ + 1) + nd;
  }

  int nmax_ = 0;
  int max_photons_ = 0;
  std::vector<double> p_;
  double truncated_weight_ = 0.0;
  double norm_error_ = 0.0;
};

/// Evolves |psi>_a |phi>_b through the dilated beamsplitter in truncated Fock
/// space. The relative phase between the independent sources is averaged.
/// Partial distinguishability splits port b into a temporal submode shared with
/// port a (weight O) and an orthogonal one (weight 1 - O).
/// nmax <= 0 selects choose_truncation().
JointStatistics apply_beamsplitter(const InputState& a, const InputState& b, const BsMatrix& m,
                                   int nmax = 0,
                                   const WavepacketModel& wavepacket = WavepacketModel::identical());

struct OracleG2 {
  double g2 = 0.0;
  double numerator = 0.0;    ///< E[n_c n_d], both ports fed
  double denominator = 0.0;  ///< distinguishable reference from single-port runs
  int nmax = 0;
};

/// g2(0) as the ratio of two-port coincidences to the self- plus cross-
/// coincidences of the single-port runs.
OracleG2 g2_oracle(const InputState& a, const InputState& b, const BsMatrix& m, int nmax = 0,
                   const WavepacketModel& wavepacket = WavepacketModel::identical());

}  // namespace mpbs
