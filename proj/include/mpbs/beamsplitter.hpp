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

#include <complex>

#include <Eigen/Dense>

#include "mpbs/params.hpp"

namespace mpbs {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;

/// Largest singular value accepted as passive.
inline constexpr double kContractionTolerance = 1e-9;
/// Channel magnitudes below this have no defined phase.
inline constexpr double kDegenerateMagnitude = 1e-12;

struct Phases {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta_plus = 0.0;  ///< theta1 + theta2 folded into (-pi, pi]
};

struct SingularValues {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};

/// Closed-form singular values of a complex 2x2 matrix, sigma1 >= sigma2 >= 0.
SingularValues singular_values(const Matrix2c& m);

/// Complex 2x2 map (E_out, M_out) = M (E_in, M_in). Port a is the optical mode,
/// port b the spin-wave mode. In the magnitude/phase layout
///
///     M = [[ t,            e^{i theta2} rho ],
///          [ e^{i theta1} r, tau            ]]
///
/// up to a phase on each output row.
class BsMatrix {
 public:
  BsMatrix() : m_(Matrix2c::Identity()) {}
  explicit BsMatrix(const Matrix2c& m) : m_(m) {}
  BsMatrix(Complex aa, Complex ab, Complex ba, Complex bb);

  static BsMatrix from_components(double t, double r, double tau, double rho, double theta1,
                                  double theta2);

  /// Builds from intensity coefficients (t^2, r^2, tau^2, rho^2) when only the
  /// phase sum is known. The sum is placed on theta1 with theta2 = 0; all
  /// correlators depend on the sum alone.
  static BsMatrix from_intensities(double t2, double r2, double tau2, double rho2,
                                   double theta_plus);

  const Matrix2c& entries() const { return m_; }
  Complex aa() const { return m_(0, 0); }
  Complex ab() const { return m_(0, 1); }
  Complex ba() const { return m_(1, 0); }
  Complex bb() const { return m_(1, 1); }

  double t() const { return std::abs(m_(0, 0)); }
  double rho() const { return std::abs(m_(0, 1)); }
  double r() const { return std::abs(m_(1, 0)); }
  double tau() const { return std::abs(m_(1, 1)); }

  /// Throws DegenerateChannel if any magnitude is below kDegenerateMagnitude.
  Phases phases() const;

  SingularValues singular_values() const { return mpbs::singular_values(m_); }
  bool is_contraction() const { return singular_values().sigma1 <= 1.0 + kContractionTolerance; }

 private:
  Matrix2c m_;
};

inline Phases phases(const BsMatrix& m) { return m.phases(); }

/// xi = exp(-zeta / (i delta + 1)).
Complex compute_xi(double delta, double zeta);
inline Complex compute_xi(const PhysicalParams& p) { return compute_xi(p.delta, p.zeta()); }

/// Thin-medium input-output matrix
///   [[1 - (eta/zeta)(1 - xi), -(eta/zeta)(1 - xi)], [-(1 - xi), xi]].
/// Throws ZetaZero for zeta == 0 and InvalidConfig for invalid parameters.
BsMatrix build_matrix(const PhysicalParams& p);

/// The zeta -> 0 limit of build_matrix: (1 - xi)/zeta -> 1/(i delta + 1).
BsMatrix build_matrix_zeta_limit(const PhysicalParams& p);

struct ZetaSearch {
  double zeta_lo = 1e-3;
  double zeta_hi = 50.0;
  int scan_points = 4000;
  double tolerance = 1e-6;  ///< on |theta_plus - target|, radians
};

/// theta_plus of build_matrix(p.with_zeta(zeta)).
double theta_plus_at(const PhysicalParams& p, double zeta);

/// Smallest zeta in the search bracket whose phase sum equals the target.
/// Throws NoSolution (carrying the attained phase range) otherwise.
double solve_zeta_for_phase(const PhysicalParams& p, double target_theta_plus,
                            const ZetaSearch& search = {});

struct ZetaApproach {
  double zeta = 0.0;
  double theta_plus = 0.0;
  double miss = 0.0;  ///< angular distance to the target
};

/// zeta in the search bracket whose phase sum comes closest to the target.
ZetaApproach nearest_zeta_for_phase(const PhysicalParams& p, double target_theta_plus,
                                    const ZetaSearch& search = {});

}  // namespace mpbs
