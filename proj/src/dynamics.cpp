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

#include "mpbs/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "mpbs/angles.hpp"
#include "mpbs/errors.hpp"

namespace mpbs {

PulseShape PulseShape::square(double duration, Complex amplitude) {
  PulseShape s;
  s.kind = Kind::Square;
  s.duration = duration;
  s.amplitude = amplitude;
  return s;
}

PulseShape PulseShape::gaussian(double duration, double width, Complex amplitude) {
  PulseShape s;
  s.kind = Kind::Gaussian;
  s.duration = duration;
  s.width = width;
  s.amplitude = amplitude;
  return s;
}

PulseShape PulseShape::sampled(double duration, std::vector<Complex> samples) {
  PulseShape s;
  s.kind = Kind::Sampled;
  s.duration = duration;
  s.samples = std::move(samples);
  return s;
}

void PulseShape::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw InvalidConfig("pulse duration must be finite and non-negative");
  }
  if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
    throw InvalidConfig("pulse amplitude must be finite");
  }
  if (kind == Kind::Gaussian && !(width > 0.0)) {
    throw InvalidConfig("gaussian pulse needs a positive width");
  }
  if (kind == Kind::Sampled) {
    if (samples.size() < 2) throw InvalidConfig("sampled pulse needs at least two samples");
    for (const auto& s : samples) {
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
        throw InvalidConfig("sampled pulse envelope must be finite");
      }
    }
  }
}

Complex PulseShape::operator()(double t) const {
  if (t < 0.0 || t > duration) return 0.0;
  switch (kind) {
    case Kind::Square:
      return amplitude;
    case Kind::Gaussian: {
      const double x = t - 0.5 * duration;
      return amplitude * std::exp(-x * x / (4.0 * width * width));
    }
    case Kind::Sampled: {
      const double pos = t / duration * static_cast<double>(samples.size() - 1);
      const auto i = std::min(static_cast<std::size_t>(pos), samples.size() - 2);
      const double frac = pos - static_cast<double>(i);
      return amplitude * ((1.0 - frac) * samples[i] + frac * samples[i + 1]);
    }
  }
  return 0.0;
}

namespace {

Complex drive_rate(const PhysicalParams& p) {
  return p.omega_c * p.omega_c / Complex(1.0, p.delta);
}

}  // namespace

double max_stable_step(const PhysicalParams& p) {
  const double b = std::abs(drive_rate(p));
  return 0.01 * (b > 0.0 ? std::min(1.0 / b, 1.0) : 1.0);
}

EvolutionTrace integrate_eom(const PhysicalParams& p, const PulseShape& e_in, Complex m0,
                             const StepSpec& grid) {
  p.validate();
  e_in.validate();
  const double limit = max_stable_step(p);
  const double requested = grid.step > 0.0 ? grid.step : grid.auto_fraction * 100.0 * limit;
  if (requested > limit * (1.0 + 1e-12)) {
    throw StepTooCoarse(
        fmt::format("step {:.4g} exceeds 0.01 * min(1/|B|, 1) = {:.4g}", requested, limit));
  }
  const auto steps = static_cast<std::size_t>(std::ceil(p.tau_p / requested - 1e-9));
  const double h = p.tau_p / static_cast<double>(steps);

  const Complex b = drive_rate(p);
  const Complex decay = p.gamma12 + b;
  const Complex k_out = p.eta / Complex(1.0, p.delta);

  // State: m, running integral of E_out, running integral of E_in.
  using State = std::array<Complex, 3>;
  auto rhs = [&](double t, const State& y) -> State {
    const Complex e = e_in(t);
    return {-decay * y[0] - b * e, e - k_out * (e + y[0]), e};
  };
  auto axpy = [](const State& y, double a, const State& k) {
    return State{y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]};
  };

  EvolutionTrace trace;
  trace.step = h;
  auto record = [&](double t, const State& y) {
    if (!grid.record) return;
    const Complex e = e_in(t);
    trace.times.push_back(t);
    trace.e_in.push_back(e);
    trace.e_out.push_back(e - k_out * (e + y[0]));
    trace.m.push_back(y[0]);
  };
  if (grid.record) {
    trace.times.reserve(steps + 1);
    trace.e_in.reserve(steps + 1);
    trace.e_out.reserve(steps + 1);
    trace.m.reserve(steps + 1);
  }

  State y{m0, 0.0, 0.0};
  record(0.0, y);
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = h * static_cast<double>(i);
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State k4 = rhs(t + h, axpy(y, h, k3));
    for (int c = 0; c < 3; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    record(h * static_cast<double>(i + 1), y);
  }
  trace.m_out = y[0];
  trace.e_out_avg = y[1] / p.tau_p;
  trace.e_in_avg = y[2] / p.tau_p;
  return trace;
}

double max_ode_residual(const PhysicalParams& p, const EvolutionTrace& trace) {
  const std::size_t n = trace.m.size();
  if (n < 5) throw PreconditionViolation("residual check needs a recorded trace of >= 5 samples");
  const Complex b = drive_rate(p);
  const Complex decay = p.gamma12 + b;
  const double h = trace.step;
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& v : trace.m) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Complex dm = (-trace.m[i + 2] + 8.0 * trace.m[i + 1] - 8.0 * trace.m[i - 1] +
                        trace.m[i - 2]) /
                       (12.0 * h);
    worst = std::max(worst, std::abs(dm + decay * trace.m[i] + b * trace.e_in[i]));
  }
  return scale > 0.0 ? worst / scale : worst;
}

BsMatrix integrate_matrix(const PhysicalParams& p, const StepSpec& grid) {
  StepSpec g = grid;
  g.record = false;
  const auto photon = integrate_eom(p, PulseShape::square(p.tau_p, 1.0), 0.0, g);
  const auto magnon = integrate_eom(p, PulseShape::square(p.tau_p, 0.0), 1.0, g);
  return BsMatrix(photon.e_out_avg, magnon.e_out_avg, photon.m_out, magnon.m_out);
}

double verify_matrix(const PhysicalParams& p, const StepSpec& grid) {
  if (p.gamma12 != 0.0) {
    throw PreconditionViolation(
        fmt::format("verify_matrix needs gamma12 = 0, got {}", p.gamma12));
  }
  const Matrix2c closed = build_matrix(p).entries();
  const Matrix2c ode = integrate_matrix(p, grid).entries();
  return (ode - closed).cwiseAbs().maxCoeff() / closed.cwiseAbs().maxCoeff();
}

SinusoidFit fit_sinusoid(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n != ys.size()) throw PreconditionViolation("fit_sinusoid: xs and ys differ in length");
  if (n < 8) throw PreconditionViolation("fit_sinusoid needs at least 8 samples");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double span = *hi - *lo;
  if (span + span / static_cast<double>(n - 1) < kTwoPi - 1e-9) {
    throw PreconditionViolation("fit_sinusoid samples must span a full period");
  }

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(xs[i]);
    design(i, 2) = std::sin(xs[i]);
    rhs(i) = ys[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 3) throw RankDeficient("fit_sinusoid: singular design matrix");
  const Eigen::Vector3d coef = qr.solve(rhs);

  SinusoidFit fit;
  fit.offset = coef(0);
  // b cos(x + c) = b cos(c) cos(x) - b sin(c) sin(x)
  fit.amplitude = std::hypot(coef(1), coef(2));
  fit.phase = fold_angle(std::atan2(-coef(2), coef(1)));
  if (fit.amplitude <= 1e-12 * std::max(1.0, std::abs(fit.offset))) {
    fit.amplitude = 0.0;
    fit.phase = 0.0;
  }
  fit.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

std::vector<double> uniform_phase_grid(int n) {
  std::vector<double> grid(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) grid[i] = kTwoPi * i / n;
  return grid;
}

FringeScan first_order_fringes(const BsMatrix& m, double m0_mag, double alpha_mag,
                               std::span<const double> phase_grid) {
  if (m0_mag < 0.0 || alpha_mag < 0.0 || (m0_mag == 0.0 && alpha_mag == 0.0)) {
    throw PreconditionViolation("fringe scan needs non-negative, not both zero, input amplitudes");
  }
  FringeScan scan;
  scan.phase_grid.assign(phase_grid.begin(), phase_grid.end());
  for (double phi : phase_grid) {
    const Eigen::Vector2cd in(alpha_mag, std::polar(m0_mag, phi));
    const Eigen::Vector2cd out = m.entries() * in;
    scan.light.push_back(std::norm(out(0)));
    scan.magnon.push_back(std::norm(out(1)));
  }
  for (auto* channel : {&scan.light, &scan.magnon}) {
    const double peak = *std::max_element(channel->begin(), channel->end());
    if (peak > 0.0) {
      for (auto& v : *channel) v /= peak;
    }
  }
  scan.light_fit = fit_sinusoid(scan.phase_grid, scan.light);
  scan.magnon_fit = fit_sinusoid(scan.phase_grid, scan.magnon);
  scan.theta_plus = fold_angle(scan.light_fit.phase - scan.magnon_fit.phase);
  return scan;
}

FringeScan first_order_fringes(const PhysicalParams& p, double m0_mag, double alpha_mag,
                               std::span<const double> phase_grid, bool use_ode) {
  return first_order_fringes(use_ode ? integrate_matrix(p) : build_matrix(p), m0_mag, alpha_mag,
                             phase_grid);
}

}  // namespace mpbs
