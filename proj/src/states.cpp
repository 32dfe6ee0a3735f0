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

#include "mpbs/states.hpp"

#include <cmath>

#include <fmt/format.h>

#include "mpbs/errors.hpp"

namespace mpbs {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_magnon(const NonidealMagnon& m) {
  if (m.p0 < 0.0 || m.p1 < 0.0 || m.p2 < 0.0) {
    throw InvalidConfig("magnon probabilities must be non-negative");
  }
  if (std::abs(m.p0 + m.p1 + m.p2 - 1.0) > 1e-12) {
    throw InvalidConfig(
        fmt::format("magnon probabilities must sum to 1, got {}", m.p0 + m.p1 + m.p2));
  }
}

}  // namespace

InputState::InputState(Variant v) : v_(std::move(v)) {
  if (const auto* m = std::get_if<NonidealMagnon>(&v_)) check_magnon(*m);
  if (const auto* c = std::get_if<Coherent>(&v_)) {
    if (!std::isfinite(c->alpha.real()) || !std::isfinite(c->alpha.imag())) {
      throw InvalidConfig("coherent amplitude must be finite");
    }
  }
}

InputState InputState::coherent_with_mean(double mean_photons) {
  if (!(mean_photons >= 0.0)) throw InvalidConfig("mean photon number must be >= 0");
  return coherent(std::sqrt(mean_photons));
}

InputState InputState::nonideal_magnon(double p0, double p1, double p2) {
  return InputState(NonidealMagnon{p0, p1, p2});
}

InputState InputState::magnon_from_g2m(double p1, double g2m) {
  if (!(p1 > 0.0) || !(g2m >= 0.0)) throw InvalidConfig("need p1 > 0 and g2m >= 0");
  const double p2 = 0.5 * g2m * p1 * p1;
  const double p0 = 1.0 - p1 - p2;
  if (p0 < 0.0) throw InvalidConfig("p1 and g2m imply a negative vacuum probability");
  return nonideal_magnon(p0, p1, p2);
}

double InputState::mean_number() const {
  return std::visit(Overloaded{[](const Coherent& c) { return std::norm(c.alpha); },
                               [](const IdealSingle&) { return 1.0; },
                               [](const NonidealMagnon& m) { return m.p1 + 2.0 * m.p2; },
                               [](const Vacuum&) { return 0.0; }},
                    v_);
}

double InputState::second_factorial_moment() const {
  return std::visit(Overloaded{[](const Coherent& c) {
                                 const double n = std::norm(c.alpha);
                                 return n * n;
                               },
                               [](const IdealSingle&) { return 0.0; },
                               [](const NonidealMagnon& m) { return 2.0 * m.p2; },
                               [](const Vacuum&) { return 0.0; }},
                    v_);
}

std::vector<double> InputState::number_distribution(int nmax) const {
  std::vector<double> p(static_cast<std::size_t>(nmax) + 1, 0.0);
  std::visit(Overloaded{[&](const Coherent& c) {
                          const double mean = std::norm(c.alpha);
                          double term = std::exp(-mean);
                          for (int n = 0; n <= nmax; ++n) {
                            p[n] = term;
                            term *= mean / (n + 1);
                          }
                        },
                        [&](const IdealSingle&) {
                          if (nmax >= 1) p[1] = 1.0;
                        },
                        [&](const NonidealMagnon& m) {
                          p[0] = m.p0;
                          if (nmax >= 1) p[1] = m.p1;
                          if (nmax >= 2) p[2] = m.p2;
                        },
                        [&](const Vacuum&) { p[0] = 1.0; }},
             v_);
  return p;
}

double InputState::tail_beyond(int nmax) const {
  const auto* c = std::get_if<Coherent>(&v_);
  if (c == nullptr) {
    if (nmax >= 2) return 0.0;
    const auto p = number_distribution(2);
    double kept = 0.0;
    for (int n = 0; n <= nmax; ++n) kept += p[n];
    return std::max(0.0, 1.0 - kept);
  }
  // Sum the tail directly; 1 - sum(head) would lose it to cancellation.
  const double mean = std::norm(c->alpha);
  if (mean == 0.0) return 0.0;
  double term = std::exp(-mean);
  for (int n = 1; n <= nmax + 1; ++n) term *= mean / n;
  double tail = 0.0;
  for (int n = nmax + 1; n < nmax + 400 && term > 0.0; ++n) {
    tail += term;
    if (term < 1e-30 * tail) break;
    term *= mean / (n + 1);
  }
  return tail;
}

std::string InputState::describe() const {
  return std::visit(
      Overloaded{[](const Coherent& c) {
                   return fmt::format("coherent(|alpha|^2={:.6g})", std::norm(c.alpha));
                 },
                 [](const IdealSingle&) { return std::string("single"); },
                 [](const NonidealMagnon& m) {
                   return fmt::format("magnon(p0={:.6g}, p1={:.6g}, p2={:.6g})", m.p0, m.p1, m.p2);
                 },
                 [](const Vacuum&) { return std::string("vacuum"); }},
      v_);
}

FourthOrderMoments moments(const InputState& a, const InputState& b,
                           MomentConvention convention) {
  FourthOrderMoments mo;
  mo.self_a = a.second_factorial_moment();
  mo.self_b = b.second_factorial_moment();
  double cross = a.mean_number() * b.mean_number();

  if (convention == MomentConvention::Approximate) {
    const auto* ma = std::get_if<NonidealMagnon>(&a.variant());
    const auto* mb = std::get_if<NonidealMagnon>(&b.variant());
    if (mb != nullptr && a.is_coherent()) {
      mo.self_a *= mb->p0;
      cross = a.mean_number() * mb->p1;
    } else if (ma != nullptr && b.is_coherent()) {
      mo.self_b *= ma->p0;
      cross = b.mean_number() * ma->p1;
    }
  }
  mo.cross_ab = mo.cross_ba = mo.interference_ab = mo.interference_ba = cross;
  return mo;
}

}  // namespace mpbs
