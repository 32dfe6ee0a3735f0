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

#include <cmath>
#include <random>

#include "doctest.h"
#include "mpbs/angles.hpp"
#include "mpbs/correlations.hpp"
#include "mpbs/errors.hpp"
#include "mpbs/presets.hpp"

using namespace mpbs;

namespace {

// Reference values from tests/oracles/freeze_values.py (50-digit mpmath).
constexpr double kOnExact = 1.7254337349047647707;
constexpr double kOnApprox = 1.734266231340066858;
constexpr double kOffExact = 0.92653764046946146947;
constexpr double kOffApprox = 0.91559790856761697988;
constexpr double kOnCrossLow = 0.011320806115910756952;
constexpr double kOnCrossHigh = 0.40794170730310841443;
constexpr double kOffStationary = 0.0093942611765501341235;
constexpr double kOffMinimum = 0.55556050943938870818;

const BsMatrix kHalfPi = BsMatrix::from_components(M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, kPi, 0.0);
const BsMatrix kHalfZero = BsMatrix::from_components(M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, 0.0, 0.0);

}  // namespace

TEST_CASE("two-particle fixed points") {
  const auto one = InputState::ideal_single();
  CHECK(std::abs(g2_analytic(one, one, kHalfPi)) < 1e-12);
  CHECK(std::abs(g2_analytic(one, one, kHalfZero) - 2.0) < 1e-12);
  const auto coh = InputState::coherent_with_mean(0.4);
  CHECK(std::abs(g2_analytic(coh, coh, kHalfPi) - 0.5) < 1e-12);
  CHECK(std::abs(g2_analytic(coh, coh, kHalfZero) - 1.5) < 1e-12);
}

TEST_CASE("measured coefficient sets") {
  const auto& on = on_resonance_preset();
  const auto& off = off_resonance_preset();
  const auto a_on = InputState::coherent_with_mean(0.05);
  const auto a_off = InputState::coherent_with_mean(0.5);
  CHECK(g2_analytic(a_on, on.magnon(), on.coefficients.matrix()) == doctest::Approx(kOnExact).epsilon(1e-13));
  CHECK(g2_analytic(a_on, on.magnon(), on.coefficients.matrix(), {}, MomentConvention::Approximate) ==
        doctest::Approx(kOnApprox).epsilon(1e-13));
  CHECK(g2_analytic(a_off, off.magnon(), off.coefficients.matrix()) == doctest::Approx(kOffExact).epsilon(1e-13));
  CHECK(g2_mixed(on.coefficients, 0.05, on.p1, on.g2m) == doctest::Approx(kOnApprox).epsilon(1e-13));
  CHECK(g2_mixed(off.coefficients, 0.5, off.p1, off.g2m) == doctest::Approx(kOffApprox).epsilon(1e-13));
  CHECK(g2_analytic(a_on, on.magnon(), on.coefficients.matrix()) > 1.5);
}

TEST_CASE("closed form equals the approximate moment convention") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.01, 0.6), a(0.005, 1.0), p(0.05, 0.4), g(0.0, 1.0), th(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const Coefficients k{u(rng), u(rng), u(rng), u(rng), th(rng)};
    const double p1 = p(rng), g2m = g(rng), a2 = a(rng);
    const auto probe = InputState::coherent_with_mean(a2);
    const auto mag = InputState::magnon_from_g2m(p1, g2m);
    CHECK(g2_mixed(k, a2, p1, g2m) ==
          doctest::Approx(g2_analytic(probe, mag, k.matrix(), {}, MomentConvention::Approximate)).epsilon(1e-12));
  }
}

TEST_CASE("contract checks") {
  const auto one = InputState::ideal_single();
  CHECK_THROWS_AS(g2_analytic(InputState::vacuum(), one, kHalfPi), VacuumPort);
  CHECK_THROWS_AS(g2_analytic(one, InputState::vacuum(), kHalfPi), VacuumPort);
  CHECK_THROWS_AS(g2_analytic(one, one, BsMatrix(0.5, 0.5, 0.0, 0.5)), DegenerateChannel);
  CHECK_THROWS_AS(g2_mixed({0.1, 0.1, 0.1, 0.1, 0.0}, 0.0, 0.2, 0.1), InvalidConfig);
  CHECK_THROWS_AS(visibility(-0.1), PreconditionViolation);
  CHECK_THROWS_AS(splitting_ratio_g2(0.0, 1.0, SourceKind::Coherent, 0.0), InvalidConfig);
}

TEST_CASE("property: quantum term has the sign of cos(theta+)") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.05, 0.6), th(-kPi, kPi);
  for (int i = 0; i < 300; ++i) {
    const double theta = th(rng);
    const BsMatrix m = BsMatrix::from_components(u(rng), u(rng), u(rng), u(rng), theta, 0.0);
    const auto a = InputState::coherent_with_mean(u(rng));
    const auto b = InputState::nonideal_magnon(0.75, 0.2, 0.05);
    const CoincidenceTerms terms = coincidence_terms(a, b, m);
    const double excess = g2_analytic(a, b, m) - 1.0;
    CHECK(terms.reference() > 0.0);
    if (std::abs(std::cos(theta)) > 1e-9) CHECK((excess > 0.0) == (std::cos(theta) > 0.0));
  }
}

TEST_CASE("splitting ratios") {
  CHECK(splitting_ratio_g2(1.0, 1.0, SourceKind::SingleParticle, 0.0).lower == doctest::Approx(2.0));
  CHECK(splitting_ratio_g2(1.0, 1.0, SourceKind::SingleParticle, 0.0).exact());
  CHECK(splitting_ratio_g2(1.0, 1.0, SourceKind::Coherent, kPi).lower == doctest::Approx(0.5));
  CHECK(splitting_ratio_g2(1.0, 1.0, SourceKind::Coherent, kPi).upper == doctest::Approx(1.0));
  CHECK(std::abs(splitting_ratio_g2(2.0, 0.5, SourceKind::SingleParticle, kPi).lower) < 1e-15);
  const G2Range mixed = splitting_ratio_g2(1.0, 1.0, SourceKind::Mixed, 0.0);
  CHECK(mixed.lower == doctest::Approx(1.5));
  CHECK(mixed.upper == doctest::Approx(2.0));

  SUBCASE("single particles see only the ratio product") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.1, 0.7), s(0.2, 5.0);
    for (int i = 0; i < 50; ++i) {
      const double s1 = s(rng), s2 = s(rng), theta = i * 0.3;
      const double r = u(rng), rho = u(rng);
      const BsMatrix m = BsMatrix::from_components(s1 * r, r, s2 * rho, rho, theta, 0.0);
      const auto one = InputState::ideal_single();
      CHECK(std::abs(g2_analytic(one, one, m) -
                     splitting_ratio_g2(s1, s2, SourceKind::SingleParticle, theta).lower) < 1e-12);
    }
  }
  SUBCASE("coherent inputs stay inside the bound") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(0.05, 0.7), s(0.2, 5.0);
    const auto coh = InputState::coherent_with_mean(0.3);
    for (int i = 0; i < 100; ++i) {
      const double s1 = s(rng), s2 = s(rng), r = u(rng), rho = u(rng);
      for (double theta : {0.0, kPi}) {
        const BsMatrix m = BsMatrix::from_components(s1 * r, r, s2 * rho, rho, theta, 0.0);
        const G2Range range = splitting_ratio_g2(s1, s2, SourceKind::Coherent, theta);
        const double g = g2_analytic(coh, coh, m);
        CHECK(g >= range.lower - 1e-12);
        CHECK(g <= range.upper + 1e-12);
      }
    }
  }
}

TEST_CASE("visibility") {
  CHECK(visibility(1.0) == 0.0);
  CHECK(visibility(0.0) == 1.0);
  CHECK(visibility(1.7) == doctest::Approx(0.7));
}

TEST_CASE("property: ideal-magnon visibility falls with probe intensity") {
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    const BsMatrix m = p->coefficients.matrix();
    double last = 2.0;
    for (int i = 0; i <= 300; ++i) {
      const double a2 = 1e-3 * std::pow(1e3, i / 300.0);
      const double v = visibility(g2_analytic(InputState::coherent_with_mean(a2), InputState::ideal_single(), m));
      CHECK(v <= last + 1e-15);
      last = v;
    }
  }
}

TEST_CASE("nonideal-magnon visibility peaks at the stationary point") {
  const auto& off = off_resonance_preset();
  const MixedDenominator den = mixed_denominator(off.coefficients, off.p1, off.g2m);
  CHECK(den.minimiser() == doctest::Approx(kOffStationary).epsilon(1e-12));
  CHECK(g2_mixed(off.coefficients, den.minimiser(), off.p1, off.g2m) == doctest::Approx(kOffMinimum).epsilon(1e-12));
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    const MixedDenominator d = mixed_denominator(p->coefficients, p->p1, p->g2m);
    const double star = d.minimiser();
    CHECK(visibility(g2_mixed(p->coefficients, star, p->p1, p->g2m)) >=
          visibility(g2_mixed(p->coefficients, star * 1.01, p->p1, p->g2m)));
    CHECK(visibility(g2_mixed(p->coefficients, star, p->p1, p->g2m)) >=
          visibility(g2_mixed(p->coefficients, star / 1.01, p->p1, p->g2m)));
  }
}

TEST_CASE("classical-limit crossings of the closed form") {
  const auto& on = on_resonance_preset();
  const auto cross = g2_mixed_crossings(on.coefficients, on.p1, on.g2m, 1.5);
  REQUIRE(cross.size() == 2);
  CHECK(cross[0] == doctest::Approx(kOnCrossLow).epsilon(1e-10));
  CHECK(cross[1] == doctest::Approx(kOnCrossHigh).epsilon(1e-10));
  const auto& off = off_resonance_preset();
  CHECK(g2_mixed_crossings(off.coefficients, off.p1, off.g2m, 0.5).empty());
  CHECK(g2_mixed_crossings(off.coefficients, off.p1, off.g2m, 0.6).size() == 2);
}

TEST_CASE("moment conventions differ by the multi-magnon cross term") {
  const auto& on = on_resonance_preset();
  const auto a = InputState::coherent_with_mean(0.05);
  const double exact = g2_analytic(a, on.magnon(), on.coefficients.matrix());
  const double approx = g2_analytic(a, on.magnon(), on.coefficients.matrix(), {}, MomentConvention::Approximate);
  CHECK(approx - exact == doctest::Approx(kOnApprox - kOnExact).epsilon(1e-9));
  // Without a two-magnon component the conventions still differ by the p0 factor on the probe self term.
  const auto pure = InputState::nonideal_magnon(0.8, 0.2, 0.0);
  CHECK(g2_analytic(a, pure, on.coefficients.matrix(), {}, MomentConvention::Approximate) >
        g2_analytic(a, pure, on.coefficients.matrix()));
}
