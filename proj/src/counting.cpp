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

#include "mpbs/counting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "mpbs/correlations.hpp"
#include "mpbs/errors.hpp"
#include "mpbs/rng.hpp"

namespace mpbs {
namespace {

void require_probability(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw InvalidConfig(std::string(name) + " must lie in [0, 1]");
  }
}

std::uint64_t fold_hash(std::uint64_t h, double v) {
  return mix64(h ^ std::bit_cast<std::uint64_t>(v));
}

std::uint64_t fold_hash(std::uint64_t h, const InputState& s) {
  return std::visit(
      [h](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        std::uint64_t k = mix64(h ^ 0x51ULL);
        if constexpr (std::is_same_v<T, Coherent>) {
          k = fold_hash(fold_hash(k ^ 1, x.alpha.real()), x.alpha.imag());
        } else if constexpr (std::is_same_v<T, IdealSingle>) {
          k = mix64(k ^ 2);
        } else if constexpr (std::is_same_v<T, NonidealMagnon>) {
          k = fold_hash(fold_hash(fold_hash(k ^ 3, x.p0), x.p1), x.p2);
        } else {
          k = mix64(k ^ 4);
        }
        return k;
      },
      s.variant());
}

struct CellSampler {
  std::vector<double> cumulative;
  std::vector<std::pair<int, int>> cells;

  explicit CellSampler(const JointStatistics& js) {
    double acc = 0.0;
    for (int nc = 0; nc <= js.max_photons(); ++nc) {
      for (int nd = 0; nd <= js.max_photons(); ++nd) {
        const double p = js(nc, nd);
        if (p <= 0.0) continue;
        acc += p;
        cumulative.push_back(acc);
        cells.emplace_back(nc, nd);
      }
    }
    for (double& c : cumulative) c /= acc;
  }

  std::pair<int, int> draw(double u) const {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto i = std::min<std::size_t>(it - cumulative.begin(), cells.size() - 1);
    return cells[i];
  }
};

bool detect(KeyedRng& rng, int quanta, double efficiency, double dark) {
  bool click = false;
  for (int k = 0; k < quanta; ++k) click |= rng.uniform() < efficiency;
  click |= rng.uniform() < dark;
  return click;
}

struct Tally {
  std::uint64_t g = 0, t = 0, r = 0, tr = 0;
};

std::pair<InputState, InputState> fed_ports(Part part, const CountingConfig& c) {
  switch (part) {
    case Part::I: return {c.photon, c.magnon};
    case Part::II: return {InputState::vacuum(), c.magnon};
    case Part::III: return {c.photon, InputState::vacuum()};
  }
  return {};
}

// Per-gate rate.
double rate(std::uint64_t n, std::uint64_t g) { return static_cast<double>(n) / static_cast<double>(g); }

}  // namespace

void DetectionChain::validate() const {
  require_probability(fiber_eff, "fiber_eff");
  require_probability(spcm_eff, "spcm_eff");
  require_probability(etalon_eff, "etalon_eff");
  require_probability(dark_rate, "dark_rate");
}

std::string_view part_name(Part p) {
  switch (p) {
    case Part::I: return "I";
    case Part::II: return "II";
    case Part::III: return "III";
  }
  return "?";
}

void CountingConfig::validate() const {
  chain.validate();
  if (trials == 0) throw InvalidConfig("trials must be positive");
  if (!(herald_probability > 0.0 && herald_probability <= 1.0)) {
    throw InvalidConfig("herald_probability must lie in (0, 1]");
  }
  if (nmax > kMaxTruncation) throw InvalidConfig("nmax above the supported truncation");
}

std::uint64_t CountingConfig::fingerprint() const {
  std::uint64_t h = 0x6d7062735f636e74ULL;
  for (const Complex& z : matrix.entries().reshaped()) h = fold_hash(fold_hash(h, z.real()), z.imag());
  h = fold_hash(h, photon);
  h = fold_hash(h, magnon);
  h = fold_hash(fold_hash(fold_hash(h, chain.fiber_eff), chain.spcm_eff), chain.etalon_eff);
  h = fold_hash(fold_hash(h, chain.dark_rate), herald_probability);
  h = fold_hash(h, wavepacket.overlap());
  return mix64(h ^ static_cast<std::uint64_t>(nmax));
}

CoincidenceRecord run_part(Part part, const CountingConfig& config) {
  config.validate();
  const auto [a, b] = fed_ports(part, config);
  const JointStatistics js = apply_beamsplitter(a, b, config.matrix, config.nmax, config.wavepacket);
  const CellSampler sampler(js);

  const double eff = config.chain.overall();
  const double dark = config.chain.dark_rate;
  const double herald = config.herald_probability;
  const std::uint64_t seed = config.chain.seed;
  const auto stream = static_cast<std::uint64_t>(part) + 1;

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    Tally tally;
    for (std::uint64_t i = begin; i < end; ++i) {
      KeyedRng rng(seed, stream, i);
      if (herald < 1.0 && rng.uniform() >= herald) continue;
      ++tally.g;
      const auto [nc, nd] = sampler.draw(rng.uniform());
      const bool t = detect(rng, nc, eff, dark);
      const bool r = detect(rng, nd, eff, dark);
      tally.t += t;
      tally.r += r;
      tally.tr += t && r;
    }
    return tally;
  };

  const std::uint64_t n = config.trials;
  unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, n / 65536)));

  std::vector<Tally> tallies(workers);
  if (workers == 1) {
    tallies[0] = work(0, n);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { tallies[w] = work(n * w / workers, n * (w + 1) / workers); });
    }
  }

  CoincidenceRecord rec;
  rec.part = part;
  rec.trials = n;
  rec.seed = seed;
  rec.config_id = config.fingerprint();
  for (const Tally& t : tallies) {
    rec.n_g += t.g;
    rec.n_gt += t.t;
    rec.n_gr += t.r;
    rec.n_gtr += t.tr;
  }
  return rec;
}

G2Estimate g2_self_from_counts(const CoincidenceRecord& rec) {
  if (rec.n_g == 0 || rec.n_gt == 0 || rec.n_gr == 0) {
    throw InsufficientCounts("no gated singles on one of the detectors");
  }
  const double g = static_cast<double>(rec.n_g);
  const double t = static_cast<double>(rec.n_gt);
  const double r = static_cast<double>(rec.n_gr);
  const double rel = 1.0 / g + 1.0 / t + 1.0 / r;
  if (rec.n_gtr == 0) {
    const double level = g / (t * r);
    return {0.0, level * std::sqrt(1.0 + rel), true};
  }
  const double tr = static_cast<double>(rec.n_gtr);
  const double g2 = tr * g / (t * r);
  return {g2, g2 * std::sqrt(1.0 / tr + rel), false};
}

G2Estimate g2_interference_from_counts(const CoincidenceRecord& p1, const CoincidenceRecord& p2,
                                       const CoincidenceRecord& p3) {
  if (p1.part != Part::I || p2.part != Part::II || p3.part != Part::III) {
    throw MismatchedConfig("records must be parts I, II and III in that order");
  }
  if (p1.trials != p2.trials || p1.trials != p3.trials) {
    throw MismatchedConfig("parts were run with different trial counts");
  }
  if (p1.config_id != p2.config_id || p1.config_id != p3.config_id) {
    throw MismatchedConfig("parts were run with different configurations");
  }
  if (p1.n_g == 0 || p2.n_g == 0 || p3.n_g == 0) throw InsufficientCounts("a part has no gates");

  const double g1 = static_cast<double>(p1.n_g);
  const double g2 = static_cast<double>(p2.n_g);
  const double g3 = static_cast<double>(p3.n_g);
  const double c1 = rate(p1.n_gtr, p1.n_g);
  const double c2 = rate(p2.n_gtr, p2.n_g), t2 = rate(p2.n_gt, p2.n_g), r2 = rate(p2.n_gr, p2.n_g);
  const double c3 = rate(p3.n_gtr, p3.n_g), t3 = rate(p3.n_gt, p3.n_g), r3 = rate(p3.n_gr, p3.n_g);

  const double cross = t2 * r3 + r2 * t3;
  const double den = c2 + c3 + cross;
  if (den <= 0.0) throw InsufficientCounts("single-port runs produced no coincidence reference");

  // First-order propagation treating every count as independent Poisson.
  auto term = [](double deriv, std::uint64_t n) { return deriv * deriv * static_cast<double>(n); };
  double var_den = 0.0;
  var_den += term(1.0 / g2, p2.n_gtr) + term(r3 / g2, p2.n_gt) + term(t3 / g2, p2.n_gr);
  var_den += term(1.0 / g3, p3.n_gtr) + term(r2 / g3, p3.n_gt) + term(t2 / g3, p3.n_gr);
  var_den += term((c2 + cross) / g2, p2.n_g) + term((c3 + cross) / g3, p3.n_g);

  if (p1.n_gtr == 0) {
    const double level = (1.0 / g1) / den;
    return {0.0, level, true};
  }
  const double g2v = c1 / den;
  const double rel_num = 1.0 / static_cast<double>(p1.n_gtr) + 1.0 / g1;
  return {g2v, g2v * std::sqrt(rel_num + var_den / (den * den)), false};
}

double expected_click_g2(const CountingConfig& config) {
  config.validate();
  const double eff = config.chain.overall();
  const double dark = config.chain.dark_rate;
  auto with_dark = [dark](const ClickProbabilities& p) {
    const double q = 1.0 - dark;
    // P(no click) = P(no signal click) * (1 - dark), per detector.
    const double nc = (1.0 - p.c) * q;
    const double nd = (1.0 - p.d) * q;
    const double none = (1.0 - p.c - p.d + p.both) * q * q;
    return ClickProbabilities{1.0 - nc, 1.0 - nd, 1.0 - nc - nd + none};
  };
  auto clicks = [&](Part part) {
    const auto [a, b] = fed_ports(part, config);
    return with_dark(apply_beamsplitter(a, b, config.matrix, config.nmax, config.wavepacket).clicks(eff));
  };
  const ClickProbabilities k1 = clicks(Part::I), k2 = clicks(Part::II), k3 = clicks(Part::III);
  const double den = k2.both + k3.both + k2.c * k3.d + k2.d * k3.c;
  if (den <= 0.0) throw InsufficientCounts("single-port runs have no coincidence reference");
  return k1.both / den;
}

double alpha2_at_beamsplitter(double quoted, const DetectionChain& chain,
                              AlphaInterpretation interpretation) {
  if (!(quoted > 0.0) || !std::isfinite(quoted)) throw InvalidConfig("alpha^2 must be positive");
  if (interpretation == AlphaInterpretation::PreCollection) return quoted;
  const double eff = chain.overall();
  if (eff <= 0.0) throw InvalidConfig("post-collection intensity needs a nonzero chain efficiency");
  return quoted / eff;
}

std::vector<AlphaSweepRow> sweep_alpha(const CountingConfig& config, std::span<const double> alphas,
                                       AlphaInterpretation interpretation) {
  if (!config.magnon.is_magnon()) throw InvalidConfig("alpha sweep needs a nonideal magnon input");
  if (alphas.empty()) throw InvalidConfig("alpha sweep needs at least one intensity");
  std::vector<AlphaSweepRow> rows;
  rows.reserve(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    CountingConfig c = config;
    AlphaSweepRow row;
    row.alpha2 = alphas[i];
    row.alpha2_bs = alpha2_at_beamsplitter(alphas[i], config.chain, interpretation);
    c.photon = InputState::coherent_with_mean(row.alpha2_bs);
    c.chain.seed = mix64(config.chain.seed + i);
    row.part_i = run_part(Part::I, c);
    row.part_ii = run_part(Part::II, c);
    row.part_iii = run_part(Part::III, c);
    row.estimate = g2_interference_from_counts(row.part_i, row.part_ii, row.part_iii);
    row.analytic = g2_analytic(c.photon, c.magnon, c.matrix, c.wavepacket, MomentConvention::Exact);
    row.theory = g2_analytic(c.photon, c.magnon, c.matrix, c.wavepacket, MomentConvention::Approximate);
    rows.push_back(row);
  }
  return rows;
}

double MagnonDecayModel::survival(double t) const {
  if (t < 0.0) throw InvalidConfig("storage time must be non-negative");
  const double x = t / time_constant;
  return law == Law::Exponential ? std::exp(-x) : std::exp(-x * x);
}

void MagnonDecayModel::validate() const {
  if (!(time_constant > 0.0) || !std::isfinite(time_constant)) {
    throw InvalidConfig("decay time constant must be positive");
  }
  if (background_p2 > 1.0) throw InvalidConfig("background p2 must not exceed 1");
}

NonidealMagnon MagnonDecayModel::at(const NonidealMagnon& initial, double t) const {
  validate();
  const double p1 = initial.p1 * survival(t);
  const double p2 = background_p2 >= 0.0 ? background_p2 : initial.p2;
  if (p1 + p2 > 1.0) throw InvalidConfig("decayed magnon populations exceed unity");
  return {1.0 - p1 - p2, p1, p2};
}

std::vector<StorageRow> storage_sweep(const CountingConfig& config, const MagnonDecayModel& decay,
                                      std::span<const double> times) {
  const auto* initial = std::get_if<NonidealMagnon>(&config.magnon.variant());
  if (initial == nullptr) throw InvalidConfig("storage sweep needs a nonideal magnon input");
  decay.validate();
  if (times.empty()) throw InvalidConfig("storage sweep needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw InvalidConfig("storage times must be nonnegative and ascending");
    }
  }
  std::vector<StorageRow> rows;
  rows.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    StorageRow row;
    row.time = times[i];
    row.magnon = decay.at(*initial, times[i]);
    CountingConfig c = config;
    c.magnon = InputState(row.magnon);
    c.chain.seed = mix64(config.chain.seed + i);
    const CoincidenceRecord r1 = run_part(Part::I, c);
    const CoincidenceRecord r2 = run_part(Part::II, c);
    const CoincidenceRecord r3 = run_part(Part::III, c);
    const auto attempt = [](auto&& estimate) -> std::optional<G2Estimate> {
      try {
        return estimate();
      } catch (const InsufficientCounts&) {
        return std::nullopt;
      }
    };
    row.g2 = attempt([&] { return g2_interference_from_counts(r1, r2, r3); });
    row.g2_m = attempt([&] { return g2_self_from_counts(r2); });
    row.g2_p = attempt([&] { return g2_self_from_counts(r3); });
    row.analytic = g2_analytic(c.photon, c.magnon, c.matrix, c.wavepacket);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mpbs
