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
#include <string>
#include <variant>
#include <vector>

namespace mpbs {

struct Coherent {
  std::complex<double> alpha;
};
struct IdealSingle {};
/// Pure state sqrt(p0)|0> + sqrt(p1)|1> + sqrt(p2)|2>.
struct NonidealMagnon {
  double p0 = 0.0;
  double p1 = 1.0;
  double p2 = 0.0;
};
struct Vacuum {};

/// Source model feeding one beamsplitter port.
class InputState {
 public:
  using Variant = std::variant<Coherent, IdealSingle, NonidealMagnon, Vacuum>;

  InputState() : v_(Vacuum{}) {}
  InputState(Variant v);  // NOLINT(google-explicit-constructor)

  static InputState coherent(std::complex<double> alpha) { return InputState(Coherent{alpha}); }
  /// Coherent state with real amplitude sqrt(mean_photons).
  static InputState coherent_with_mean(double mean_photons);
  static InputState ideal_single() { return InputState(IdealSingle{}); }
  static InputState vacuum() { return InputState(Vacuum{}); }
  static InputState nonideal_magnon(double p0, double p1, double p2);
  /// p2 from g2m ~= 2 p2 / p1^2, p0 = 1 - p1 - p2.
  static InputState magnon_from_g2m(double p1, double g2m);

  const Variant& variant() const { return v_; }
  bool is_vacuum() const { return std::holds_alternative<Vacuum>(v_); }
  bool is_coherent() const { return std::holds_alternative<Coherent>(v_); }
  bool is_magnon() const { return std::holds_alternative<NonidealMagnon>(v_); }

  /// <n>
  double mean_number() const;
  /// <a^dag a^dag a a>
  double second_factorial_moment() const;

  /// |<n|psi>|^2 for n = 0..nmax.
  std::vector<double> number_distribution(int nmax) const;

  /// Probability mass beyond nmax (nonzero only for coherent states).
  double tail_beyond(int nmax) const;

  std::string describe() const;

 private:
  Variant v_;
};

/// The six non-vanishing normally ordered fourth-order moments of a product
/// input |psi>_a |phi>_b after averaging over the relative phase.
struct FourthOrderMoments {
  double self_a = 0.0;           ///< <a^dag a^dag a a>
  double self_b = 0.0;           ///< <b^dag b^dag b b>
  double cross_ab = 0.0;         ///< <a^dag b^dag b a>
  double cross_ba = 0.0;         ///< <b^dag a^dag a b>
  double interference_ba = 0.0;  ///< <b^dag a^dag b a>
  double interference_ab = 0.0;  ///< <a^dag b^dag a b>
};

enum class MomentConvention {
  Exact,        ///< product-state moments
  Approximate,  ///< coherent+magnon: self term |alpha|^4 p0, cross |alpha|^2 p1
};

FourthOrderMoments moments(const InputState& a, const InputState& b,
                           MomentConvention convention = MomentConvention::Exact);

}  // namespace mpbs
