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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mpbs/beamsplitter.hpp"
#include "mpbs/fock.hpp"
#include "mpbs/states.hpp"

namespace mpbs {

/// Collection chain between the beamsplitter outputs and the click record.
struct DetectionChain {
  double fiber_eff = 0.90;
  double spcm_eff = 0.50;
  double etalon_eff = 0.80;
  double dark_rate = 0.0;  ///< background click probability per detector per gate window
  std::uint64_t seed = 0;

  double overall() const { return fiber_eff * spcm_eff * etalon_eff; }
  void validate() const;
};

/// Which ports are fed: I both, II magnon only, III photon only.
enum class Part { I, II, III };
std::string_view part_name(Part p);

/// Gated counts of one experiment part. "T" is the detector behind output c
/// (optical mode), "R" the one behind output d (spin-wave read-out).
struct CoincidenceRecord {
  Part part = Part::I;
  std::uint64_t n_g = 0;
  std::uint64_t n_gt = 0;
  std::uint64_t n_gr = 0;
  std::uint64_t n_gtr = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_id = 0;  ///< fingerprint of everything but the fed ports

  bool operator==(const CoincidenceRecord&) const = default;
};

/// How a quoted probe intensity maps onto |alpha|^2 at the beamsplitter.
enum class AlphaInterpretation {
  PreCollection,   ///< quoted value is the launched intensity, used as is
  PostCollection,  ///< quoted value was measured behind the collection chain
};

struct CountingConfig {
  BsMatrix matrix;
  InputState photon = InputState::coherent_with_mean(0.1);  ///< port a
  InputState magnon = InputState::ideal_single();           ///< port b
  DetectionChain chain;
  std::uint64_t trials = 1;
  double herald_probability = 1.0;  ///< chance a cycle yields a Stokes gate
  WavepacketModel wavepacket;
  int nmax = 0;
  unsigned threads = 0;  ///< 0 picks hardware concurrency

  void validate() const;
  std::uint64_t fingerprint() const;
};

/// Simulates one part: per gated trial the output numbers are drawn from the
/// oracle's joint statistics, thinned quantum-by-quantum by the chain, and
/// turned into threshold clicks. Deterministic for a given chain.seed.
CoincidenceRecord run_part(Part part, const CountingConfig& config);

struct G2Estimate {
  double g2 = 0.0;
  double sigma = 0.0;
  bool one_sided = false;  ///< no coincidences: sigma is the one-count level
};

/// N_GTR N_G / (N_GT N_GR) with first-order Poisson propagation.
G2Estimate g2_self_from_counts(const CoincidenceRecord& record);

/// Two-port coincidence rate over the single-port self- plus cross-
/// coincidence rates, all per gate.
G2Estimate g2_interference_from_counts(const CoincidenceRecord& part_i,
                                       const CoincidenceRecord& part_ii,
                                       const CoincidenceRecord& part_iii);

/// Expected value of the interference estimator for threshold detectors at
/// infinite trials, from the oracle click probabilities.
double expected_click_g2(const CountingConfig& config);

struct AlphaSweepRow {
  double alpha2 = 0.0;       ///< quoted probe intensity
  double alpha2_bs = 0.0;    ///< intensity at the beamsplitter
  G2Estimate estimate;       ///< Monte Carlo
  double analytic = 0.0;     ///< product-state moments
  double theory = 0.0;       ///< p1/g2m closed form (approximate moments)
  CoincidenceRecord part_i, part_ii, part_iii;
};

/// The magnon port must hold a NonidealMagnon; config.photon is replaced per row.
std::vector<AlphaSweepRow> sweep_alpha(const CountingConfig& config,
                                       std::span<const double> alphas,
                                       AlphaInterpretation interpretation =
                                           AlphaInterpretation::PreCollection);

double alpha2_at_beamsplitter(double quoted, const DetectionChain& chain,
                              AlphaInterpretation interpretation);

/// Storage-time dependence of the magnon state.
struct MagnonDecayModel {
  enum class Law { Exponential, Gaussian };

  Law law = Law::Exponential;
  double time_constant = 3.0;  ///< same unit as the storage times
  double background_p2 = -1.0; ///< fixed multi-magnon background; < 0 keeps the initial p2

  double survival(double t) const;
  /// p1 decays with survival(t), p2 stays at the background, p0 absorbs the rest.
  NonidealMagnon at(const NonidealMagnon& initial, double t) const;
  void validate() const;
};

struct StorageRow {
  double time = 0.0;
  NonidealMagnon magnon;
  // Empty when a part has too few counts at this storage time.
  std::optional<G2Estimate> g2;
  std::optional<G2Estimate> g2_m;
  std::optional<G2Estimate> g2_p;
  double analytic = 0.0;
};

std::vector<StorageRow> storage_sweep(const CountingConfig& config, const MagnonDecayModel& decay,
                                      std::span<const double> times);

}  // namespace mpbs
