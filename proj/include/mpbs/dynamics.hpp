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
#include <span>
#include <vector>

#include "mpbs/beamsplitter.hpp"
#include "mpbs/params.hpp"

namespace mpbs {

/// Temporal envelope of the optical input E_in(t), times in 1/gamma13 units.
struct PulseShape {
  enum class Kind { Square, Gaussian, Sampled };

  Kind kind = Kind::Square;
  double duration = 1.0;
  Complex amplitude = 1.0;
  double width = 0.0;            ///< Gaussian: rms width of |E|^2, centred at duration/2
  std::vector<Complex> samples;  ///< Sampled: uniform grid over [0, duration], both ends included

  static PulseShape square(double duration, Complex amplitude = 1.0);
  static PulseShape gaussian(double duration, double width, Complex amplitude = 1.0);
  static PulseShape sampled(double duration, std::vector<Complex> samples);

  /// E_in(t); zero outside [0, duration].
  Complex operator()(double t) const;

  void validate() const;
};

struct StepSpec {
  double step = 0.0;              ///< requested step; 0 picks auto_fraction * min(1/|B|, 1)
  double auto_fraction = 0.002;
  bool record = true;             ///< keep the per-step samples
};

/// Largest step accepted by integrate_eom: 0.01 * min(1/|B|, 1).
double max_stable_step(const PhysicalParams& p);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<Complex> e_in;
  std::vector<Complex> e_out;
  std::vector<Complex> m;
  Complex e_in_avg;   ///< integral of E_in over the pulse / tau_p
  Complex e_out_avg;  ///< integral of E_out over the pulse / tau_p
  Complex m_out;      ///< m(tau_p)
  double step = 0.0;
};

/// Integrates the thin-medium single-mode pair
///   dm/dt = -(gamma12 + B) m - B E_in(t),   B = omega_c^2 / (i delta + 1),
///   E_out = E_in - eta / (i delta + 1) * (E_in + m),
/// over [0, tau_p] with classical RK4. Throws StepTooCoarse when the step
/// exceeds max_stable_step.
EvolutionTrace integrate_eom(const PhysicalParams& p, const PulseShape& e_in, Complex m0,
                             const StepSpec& grid = {});

/// Max over interior samples of |dm/dt + (gamma12 + B) m + B E_in|, with the
/// derivative from a five-point stencil, divided by max |m|. Needs a recorded
/// trace with at least five samples.
double max_ode_residual(const PhysicalParams& p, const EvolutionTrace& trace);

/// Assembles the 2x2 map from two integrations with basis inputs
/// (E_in, M_in) = (1, 0) and (0, 1), square pulse.
BsMatrix integrate_matrix(const PhysicalParams& p, const StepSpec& grid = {});

/// max_ij |M_ode - M_closed| / max_ij |M_closed|. Requires gamma12 == 0
/// (PreconditionViolation otherwise).
double verify_matrix(const PhysicalParams& p, const StepSpec& grid = {});

struct SinusoidFit {
  double amplitude = 0.0;
  double phase = 0.0;  ///< c in a + b cos(x + c), folded into (-pi, pi]
  double offset = 0.0;
  double residual = 0.0;  ///< rms of the fit residuals
};

/// Linear least squares for y = a + b cos(x + c) through the cos/sin basis.
/// Needs at least 8 samples spanning a full period. A vanishing amplitude is
/// reported as amplitude 0, phase 0.
SinusoidFit fit_sinusoid(std::span<const double> xs, std::span<const double> ys);

struct FringeScan {
  std::vector<double> phase_grid;
  std::vector<double> light;   ///< |E_out|^2, normalised to the scan maximum
  std::vector<double> magnon;  ///< |M_out|^2, normalised to the scan maximum
  SinusoidFit light_fit;
  SinusoidFit magnon_fit;
  double theta_plus = 0.0;  ///< light_fit.phase - magnon_fit.phase, folded
};

/// First-order interference of E_in = alpha and M_in = m0 e^{i phi} through the
/// beamsplitter, scanned over phi.
FringeScan first_order_fringes(const BsMatrix& m, double m0_mag, double alpha_mag,
                               std::span<const double> phase_grid);

/// Same, with the output map taken from build_matrix (use_ode = false) or
/// from integrate_matrix (use_ode = true).
FringeScan first_order_fringes(const PhysicalParams& p, double m0_mag, double alpha_mag,
                               std::span<const double> phase_grid, bool use_ode = false);

/// n points uniformly covering [0, 2 pi).
std::vector<double> uniform_phase_grid(int n);

}  // namespace mpbs
