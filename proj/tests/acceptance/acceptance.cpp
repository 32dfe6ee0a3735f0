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

// Acceptance suite: one PASS/FAIL line per criterion. Criteria 4 and 5 are
// known to be unattainable with the published coefficients and regimes; the
// process exits 0 only when every failure is one of those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "mpbs/angles.hpp"
#include "mpbs/beamsplitter.hpp"
#include "mpbs/correlations.hpp"
#include "mpbs/counting.hpp"
#include "mpbs/dynamics.hpp"
#include "mpbs/errors.hpp"
#include "mpbs/fock.hpp"
#include "mpbs/params.hpp"
#include "mpbs/presets.hpp"

using namespace mpbs;

namespace {

// Pinned tolerances and budgets.
constexpr double kMatrixTol = 1e-6;
constexpr double kMatrixBudgetS = 10.0;
constexpr double kOracleRandomTol = 1e-6;
constexpr double kOraclePresetTol = 1e-9;
constexpr double kOracleBudgetS = 30.0;
constexpr double kFixedPointTol = 1e-12;
constexpr double kPhaseTol = 1e-6;
constexpr double kNearPiTol = 0.1;
constexpr double kFringeTol = 0.02;
constexpr double kSigmas = 3.0;
constexpr std::uint64_t kTrials = 1'000'000;
constexpr double kCountingBudgetS = 60.0;
constexpr double kProductTol = 1e-12;
constexpr double kBoundSlack = 1e-12;

const std::set<int> kExpectedRed{4, 5};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome closed_form_validation() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> d(-20.0, 20.0), z(0.05, 20.0), e(0.05, 5.0);
  double worst = 0.0;
  int accepted = 0;
  while (accepted < 20) {
    PhysicalParams p;
    p.delta = d(rng);
    p.eta = e(rng);
    p = p.with_zeta(z(rng));
    if (!build_matrix(p).is_contraction()) continue;
    worst = std::max(worst, verify_matrix(p));
    ++accepted;
  }
  const double secs = seconds_since(t0);
  return {worst < kMatrixTol && secs < kMatrixBudgetS,
          fmt::format("20 contractive sets, worst relative error {:.2e} (< {:.0e}), {:.2f} s (< {:.0f} s)", worst,
                      kMatrixTol, secs, kMatrixBudgetS)};
}

BsMatrix random_contraction(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Matrix2c a;
  for (int k = 0; k < 4; ++k) a(k / 2, k % 2) = Complex(n(rng), n(rng));
  return BsMatrix(Matrix2c(a * (u(rng) / singular_values(a).sigma1)));
}

InputState random_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (rng() % 3) {
    case 0: return InputState::coherent(std::polar(std::sqrt(u(rng)), kTwoPi * u(rng)));
    case 1: return InputState::ideal_single();
    default: {
      const double p1 = 0.05 + 0.5 * u(rng);
      const double p2 = 0.3 * u(rng) * p1;
      return InputState::nonideal_magnon(1.0 - p1 - p2, p1, p2);
    }
  }
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260102);
  double worst_random = 0.0;
  for (int i = 0; i < 50; ++i) {
    const BsMatrix m = random_contraction(rng);
    const InputState a = random_input(rng), b = random_input(rng);
    worst_random = std::max(worst_random, std::abs(g2_oracle(a, b, m).g2 - g2_analytic(a, b, m)));
  }
  double worst_preset = 0.0;
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    const auto a = InputState::coherent_with_mean(p->alpha2_dot);
    const BsMatrix m = p->coefficients.matrix();
    worst_preset =
        std::max(worst_preset, std::abs(g2_oracle(a, p->magnon(), m, kMaxTruncation).g2 - g2_analytic(a, p->magnon(), m)));
  }
  const double secs = seconds_since(t0);
  return {worst_random < kOracleRandomTol && worst_preset < kOraclePresetTol && secs < kOracleBudgetS,
          fmt::format("50 random cases worst {:.2e} (< {:.0e}); presets worst {:.2e} (< {:.0e}) at nmax={}; {:.2f} s",
                      worst_random, kOracleRandomTol, worst_preset, kOraclePresetTol, kMaxTruncation, secs)};
}

Outcome hom_fixed_points() {
  const double h = 1.0 / std::sqrt(2.0);
  const BsMatrix anti = BsMatrix::from_components(h, h, h, h, kPi, 0.0);
  // A lossless 50:50 split forces theta+ = pi; the theta+ = 0 case is its passive twin.
  const BsMatrix bunch = BsMatrix::from_components(0.5, 0.5, 0.5, 0.5, 0.0, 0.0);
  const auto one = InputState::ideal_single();
  const auto coh = InputState::coherent_with_mean(0.5);
  const double e_anti = std::max(std::abs(g2_analytic(one, one, anti)), std::abs(g2_oracle(one, one, anti).g2));
  const double e_bunch =
      std::max(std::abs(g2_analytic(one, one, bunch) - 2.0), std::abs(g2_oracle(one, one, bunch).g2 - 2.0));
  const double e_coh = std::abs(g2_analytic(coh, coh, anti) - 0.5);
  const double worst = std::max({e_anti, e_bunch, e_coh});
  return {worst < kFixedPointTol,
          fmt::format("single-single theta+=pi err {:.1e}, theta+=0 err {:.1e}, coherent floor err {:.1e} (< {:.0e})",
                      e_anti, e_bunch, e_coh, kFixedPointTol)};
}

std::string list(const std::vector<double>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += fmt::format("{}{:.4g}", i ? ", " : "", xs[i]);
  return s + "]";
}

Outcome figure3_crossings() {
  const auto& on = on_resonance_preset();
  const auto& off = off_resonance_preset();
  const auto on_cross = g2_mixed_crossings(on.coefficients, on.p1, on.g2m, 1.5, 1e-3, 1.0);
  const auto off_cross = g2_mixed_crossings(off.coefficients, off.p1, off.g2m, 0.5, 1e-3, 1.0);
  const auto inside = [](const std::vector<double>& xs, double lo, double hi) {
    return std::any_of(xs.begin(), xs.end(), [&](double x) { return x >= lo && x <= hi; });
  };
  const bool on_ok = inside(on_cross, 0.02, 0.10);
  const bool off_ok = inside(off_cross, 0.2, 1.0);
  const MixedDenominator den = mixed_denominator(off.coefficients, off.p1, off.g2m);
  return {on_ok && off_ok,
          fmt::format("on-resonance g2=1.5 at alpha2={} (want one in [0.02, 0.10]); off-resonance g2=0.5 at {} "
                      "(want one in [0.2, 1.0]; minimum {:.4f} at alpha2={:.4g})",
                      list(on_cross), list(off_cross), g2_mixed(off.coefficients, den.minimiser(), off.p1, off.g2m),
                      den.minimiser())};
}

PhysicalParams fringe_base(std::string_view name) {
  const FringePreset f = *find_fringe_preset(name);
  PhysicalParams p;
  p.eta = f.eta;
  p.delta = mhz_to_gamma13_units(f.delta_mhz);
  p.tau_p = f.tau_p;
  return p;
}

Outcome phase_regimes() {
  std::vector<std::string> notes;
  bool pass = true;
  const auto grid = uniform_phase_grid(64);
  double worst_fit = 0.0;
  const auto fit_error = [&](const PhysicalParams& q) {
    const double theta = build_matrix(q).phases().theta_plus;
    const double err = angular_distance(first_order_fringes(q, 1.0, 1.0, grid).theta_plus, theta);
    worst_fit = std::max(worst_fit, err);
    return err;
  };

  // theta+ = 0 at OD 10 on resonance, drive restricted to [0.1, 25].
  {
    ZetaSearch search;
    search.zeta_lo = 0.1;
    search.zeta_hi = 25.0;
    const PhysicalParams base = fringe_base("fig2a");
    try {
      const double zeta = solve_zeta_for_phase(base, 0.0, search);
      const PhysicalParams q = base.with_zeta(zeta);
      const BsMatrix m = build_matrix(q);
      const bool ok = angular_distance(m.phases().theta_plus, 0.0) < kPhaseTol;
      pass = pass && ok;
      fit_error(q);
      notes.push_back(fmt::format("OD10: zeta={:.5g} theta+={:.2e} sigma1={:.7f}", zeta, m.phases().theta_plus,
                                  m.singular_values().sigma1));
    } catch (const NoSolution& e) {
      pass = false;
      notes.push_back(fmt::format("OD10: {}", e.what()));
    }
  }
  // theta+ = pi/2 at OD 30, -10 MHz.
  {
    const PhysicalParams base = fringe_base("fig2b");
    try {
      const double zeta = solve_zeta_for_phase(base, kPi / 2);
      const PhysicalParams q = base.with_zeta(zeta);
      const bool ok = angular_distance(build_matrix(q).phases().theta_plus, kPi / 2) < kPhaseTol;
      pass = pass && ok;
      fit_error(q);
      notes.push_back(fmt::format("OD30/-10MHz: zeta={:.5g} attained", zeta));
    } catch (const NoSolution& e) {
      pass = false;
      notes.push_back(fmt::format("OD30/-10MHz: {}", e.what()));
    }
  }
  // theta+ within 0.1 rad of pi at OD 30, -50 MHz.
  {
    const PhysicalParams base = fringe_base("fig2c");
    const ZetaApproach best = nearest_zeta_for_phase(base, kPi);
    const bool ok = best.miss < kNearPiTol;
    pass = pass && ok;
    fit_error(base.with_zeta(best.zeta));
    notes.push_back(fmt::format("OD30/-50MHz: closest theta+={:.4f} at zeta={:.4g}, {:.3f} rad from pi (< {})",
                                best.theta_plus, best.zeta, best.miss, kNearPiTol));
  }
  pass = pass && worst_fit < kFringeTol;
  std::string detail;
  for (const auto& n : notes) detail += n + "; ";
  detail += fmt::format("worst fringe-fit error {:.1e} (< {})", worst_fit, kFringeTol);
  return {pass, detail};
}

CountingConfig counting_for(const CoefficientPreset& p, std::uint64_t seed) {
  CountingConfig c;
  c.matrix = p.coefficients.matrix();
  c.photon = InputState::coherent_with_mean(p.alpha2_dot);
  c.magnon = p.magnon();
  c.trials = kTrials;
  c.chain.seed = seed;
  return c;
}

Outcome counting_consistency() {
  bool pass = true;
  std::string detail;
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    const auto t0 = Clock::now();
    const CountingConfig c = counting_for(*p, 20260106);
    const CoincidenceRecord r1 = run_part(Part::I, c), r2 = run_part(Part::II, c), r3 = run_part(Part::III, c);
    const G2Estimate e = g2_interference_from_counts(r1, r2, r3);
    const double secs = seconds_since(t0);
    const double analytic = g2_analytic(c.photon, c.magnon, c.matrix);
    const double pull = std::abs(e.g2 - analytic) / e.sigma;
    const bool same = run_part(Part::I, c) == r1 && run_part(Part::II, c) == r2 && run_part(Part::III, c) == r3;
    pass = pass && pull < kSigmas && same && secs < kCountingBudgetS;
    detail += fmt::format("{}: {:.4f} +- {:.4f} vs {:.4f} ({:.2f} sigma), reproducible={}, {:.2f} s; ", p->name, e.g2,
                          e.sigma, analytic, pull, same, secs);
  }
  return {pass, detail + fmt::format("{} trials per part, bound {} sigma", kTrials, kSigmas)};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

Outcome visibility_structure() {
  const auto grid = log_grid(1e-3, 1.0, 1001);
  bool pass = true;
  std::string detail;
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    const BsMatrix m = p->coefficients.matrix();
    bool monotone = true;
    double last = std::numeric_limits<double>::infinity();
    for (double a2 : grid) {
      const double v = visibility(g2_analytic(InputState::coherent_with_mean(a2), InputState::ideal_single(), m));
      monotone = monotone && v <= last;
      last = v;
    }
    std::vector<double> vis;
    for (double a2 : grid) vis.push_back(visibility(g2_mixed(p->coefficients, a2, p->p1, p->g2m)));
    const auto peak = static_cast<std::ptrdiff_t>(std::max_element(vis.begin(), vis.end()) - vis.begin());
    bool unimodal = true;
    for (std::ptrdiff_t i = 1; i < static_cast<std::ptrdiff_t>(vis.size()); ++i) {
      if (i <= peak) unimodal = unimodal && vis[i] >= vis[i - 1];
      else unimodal = unimodal && vis[i] <= vis[i - 1];
    }
    const double star = mixed_denominator(p->coefficients, p->p1, p->g2m).minimiser();
    const auto nearest = static_cast<std::ptrdiff_t>(
        std::min_element(grid.begin(), grid.end(),
                         [&](double x, double y) { return std::abs(std::log(x / star)) < std::abs(std::log(y / star)); }) -
        grid.begin());
    const bool located = std::abs(peak - nearest) <= 1;
    pass = pass && monotone && unimodal && located;
    detail += fmt::format("{}: ideal monotone={}, unimodal={}, argmax {:.5g} vs sqrt(B/A) {:.5g} ({} steps); ",
                          p->name, monotone, unimodal, grid[peak], star, std::abs(peak - nearest));
  }
  return {pass, detail + "1001-point log grid on [1e-3, 1]"};
}

Outcome splitting_ratio_laws() {
  std::mt19937_64 rng(20260108);
  std::uniform_real_distribution<double> u(0.05, 0.7), s(0.2, 5.0), ph(-kPi, kPi);
  const auto one = InputState::ideal_single();
  double worst_product = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double product = s(rng), theta = ph(rng);
    const double s1a = s(rng), s1b = s(rng);
    const auto g2_for = [&](double s1) {
      const double r = u(rng), rho = u(rng);
      return g2_analytic(one, one, BsMatrix::from_components(s1 * r, r, product / s1 * rho, rho, theta, 0.0));
    };
    const double a = g2_for(s1a), b = g2_for(s1b);
    worst_product = std::max(
        {worst_product, std::abs(a - b),
         std::abs(a - splitting_ratio_g2(s1a, product / s1a, SourceKind::SingleParticle, theta).lower)});
  }
  int violations = 0;
  const auto coh = InputState::coherent_with_mean(0.3);
  for (int i = 0; i < 100; ++i) {
    const double s1 = s(rng), s2 = s(rng), r = u(rng), rho = u(rng);
    for (double theta : {0.0, kPi}) {
      const G2Range range = splitting_ratio_g2(s1, s2, SourceKind::Coherent, theta);
      const double g = g2_analytic(coh, coh, BsMatrix::from_components(s1 * r, r, s2 * rho, rho, theta, 0.0));
      violations += (g < range.lower - kBoundSlack || g > range.upper + kBoundSlack);
    }
  }
  return {worst_product < kProductTol && violations == 0,
          fmt::format("equal-product spread {:.1e} (< {:.0e}) over 10 pairs; {} bound violations in 100 coherent sets",
                      worst_product, kProductTol, violations)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed-form validation", closed_form_validation},
      {"oracle equivalence", oracle_equivalence},
      {"HOM fixed points", hom_fixed_points},
      {"figure 3 classical-limit crossings", figure3_crossings},
      {"figure 2 phase regimes", phase_regimes},
      {"Monte Carlo consistency", counting_consistency},
      {"visibility structure", visibility_structure},
      {"splitting-ratio laws", splitting_ratio_laws},
  };
  std::vector<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    if (!o.pass) failed.push_back(id);
    fmt::print("{} {} {}: {}\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  const bool only_expected =
      std::all_of(failed.begin(), failed.end(), [](int id) { return kExpectedRed.count(id) > 0; });
  std::string reds;
  for (int id : failed) reds += fmt::format(" {}", id);
  fmt::print("summary: {}/{} pass; failing:{}; {}\n", criteria.size() - failed.size(), criteria.size(),
             failed.empty() ? " none" : reds,
             only_expected ? "all failures are documented as unattainable" : "UNEXPECTED failure");
  return only_expected ? 0 : 1;
}
