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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpbs/angles.hpp"
#include "mpbs/config.hpp"
#include "mpbs/correlations.hpp"
#include "mpbs/counting.hpp"
#include "mpbs/dynamics.hpp"
#include "mpbs/errors.hpp"
#include "mpbs/fock.hpp"
#include "mpbs/presets.hpp"

namespace mpbs::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

enum class Format { Csv, Json };

struct Options {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string out_path;
  std::string format;
  std::string alpha_interpretation;
  bool explain = false;
  double tolerance_scale = 1.0;
};

/// Tabular output with free-form metadata; rendered as CSV or JSON.
struct Table {
  std::string schema;
  ordered_json meta = ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<ordered_json>> rows;
};

std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return fmt::format("{:.17g}", v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void write_table(std::ostream& os, const Table& t, Format f) {
  if (f == Format::Json) {
    ordered_json j;
    j["schema"] = t.schema;
    for (const auto& [k, v] : t.meta.items()) j[k] = v;
    j["columns"] = t.columns;
    j["rows"] = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json r = ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
      j["rows"].push_back(r);
    }
    os << j.dump(2) << '\n';
    return;
  }
  os << "# schema: " << t.schema << '\n';
  for (const auto& [k, v] : t.meta.items()) os << "# " << k << ": " << v.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

ordered_json complex_json(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

ordered_json nullable(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(); }

struct Context {
  Options opt;
  std::ostream* out;
  std::ostream* err;
  Format format(Format fallback) const {
    if (opt.format.empty()) return fallback;
    return opt.format == "json" ? Format::Json : Format::Csv;
  }
};

RunConfig apply_overrides(RunConfig c, const Options& o) {
  if (o.seed) c.chain.seed = *o.seed;
  if (o.trials) c.trials = *o.trials;
  if (o.alpha_interpretation == "pre-collection") c.interpretation = AlphaInterpretation::PreCollection;
  if (o.alpha_interpretation == "post-collection") c.interpretation = AlphaInterpretation::PostCollection;
  c.validate();
  return c;
}

/// Configs selected by --config / --preset, or the given default presets.
std::vector<RunConfig> select_configs(const Options& o, std::initializer_list<const char*> defaults) {
  if (!o.config_path.empty() && !o.preset.empty()) {
    throw InvalidConfig("--config and --preset are mutually exclusive");
  }
  std::vector<RunConfig> out;
  if (!o.config_path.empty()) {
    out.push_back(apply_overrides(load_config(o.config_path), o));
  } else if (!o.preset.empty()) {
    out.push_back(apply_overrides(preset_config(o.preset), o));
  } else {
    if (defaults.size() == 0) throw InvalidConfig("command needs --config or --preset");
    for (const char* name : defaults) out.push_back(apply_overrides(preset_config(name), o));
  }
  return out;
}

std::string label(const RunConfig& c) { return c.preset.empty() ? "config" : c.preset; }

/// Resolves the drive strength; an unattainable phase target falls back to
/// the closest approach with a warning instead of failing.
struct Resolved {
  PhysicalParams params;
  std::optional<double> target;
  bool attained = true;
};

Resolved resolve_best_effort(const RunConfig& c, std::ostream& err) {
  if (!c.physical) throw InvalidConfig("command needs a physical section");
  Resolved r;
  r.target = c.physical->target_theta_plus;
  try {
    r.params = c.resolved_params();
  } catch (const NoSolution& e) {
    const ZetaApproach best = nearest_zeta_for_phase(c.physical->params, *r.target);
    r.params = c.physical->params.with_zeta(best.zeta);
    r.attained = false;
    err << fmt::format("warning: {}: {}; using closest approach zeta={:.6g} (theta_plus={:.6f})\n",
                       label(c), e.what(), best.zeta, best.theta_plus);
  }
  return r;
}

// ---------------------------------------------------------------- matrix

int cmd_matrix(const Context& ctx) {
  const RunConfig c = select_configs(ctx.opt, {}).front();
  const BsMatrix m = c.matrix();
  ordered_json j;
  j["schema"] = "mpbs.matrix/1";
  j["source"] = label(c);
  if (c.physical) {
    const PhysicalParams p = c.resolved_params();
    j["physical"] = {{"delta_gamma13_units", p.delta},
                     {"delta_MHz", p.delta * kGamma13MHz},
                     {"eta", p.eta},
                     {"tau_p_inv_gamma13", p.tau_p},
                     {"zeta", p.zeta()},
                     {"xi", complex_json(compute_xi(p))},
                     {"dephasing_negligible", p.dephasing_negligible()}};
  }
  j["entries"] = {{"m_aa", complex_json(m.aa())},
                  {"m_ab", complex_json(m.ab())},
                  {"m_ba", complex_json(m.ba())},
                  {"m_bb", complex_json(m.bb())}};
  j["t2"] = m.t() * m.t();
  j["r2"] = m.r() * m.r();
  j["tau2"] = m.tau() * m.tau();
  j["rho2"] = m.rho() * m.rho();
  bool degenerate = false;
  try {
    const Phases ph = m.phases();
    j["theta1"] = ph.theta1;
    j["theta2"] = ph.theta2;
    j["theta_plus"] = ph.theta_plus;
  } catch (const DegenerateChannel&) {
    degenerate = true;
    j["theta1"] = j["theta2"] = j["theta_plus"] = nullptr;
  }
  const SingularValues sv = m.singular_values();
  j["sigma1"] = sv.sigma1;
  j["sigma2"] = sv.sigma2;
  j["contraction"] = m.is_contraction();

  if (ctx.format(Format::Json) == Format::Json) {
    *ctx.out << j.dump(2) << '\n';
  } else {
    Table t{"mpbs.matrix/1", {}, {"key", "value"}, {}};
    const ordered_json flat = j.flatten();
    for (const auto& [k, v] : flat.items()) {
      if (k != "/schema") t.rows.push_back({k, v});
    }
    write_table(*ctx.out, t, Format::Csv);
  }
  if (!m.is_contraction()) {
    *ctx.err << fmt::format("error: matrix is not a contraction (sigma1 = {:.9g})\n", sv.sigma1);
    return kExitDomain;
  }
  if (degenerate) {
    *ctx.err << "error: a channel magnitude vanishes; phases undefined\n";
    return kExitDomain;
  }
  return kExitOk;
}

// ----------------------------------------------------------- phase-sweep

std::optional<Phases> try_phases(const PhysicalParams& p) {
  try {
    return build_matrix(p).phases();
  } catch (const DegenerateChannel&) {
    return std::nullopt;
  }
}

int cmd_phase_sweep(const Context& ctx) {
  const RunConfig c = select_configs(ctx.opt, {}).front();
  const PhysicalParams base = resolve_best_effort(c, *ctx.err).params;
  if (base.zeta() == 0.0) throw InvalidConfig("phase sweep needs zeta > 0");
  const DeltaRange range = c.delta_range.value_or(DeltaRange{0.0, -100.0, 201});
  if (range.points < 2 || range.from == range.to) throw InvalidConfig("empty detuning range");
  const double target = kPi / 2;

  Table t;
  t.schema = "mpbs.phase-sweep/1";
  t.columns = {"delta_gamma13_units", "delta_MHz", "theta1", "theta2", "theta_plus", "sigma1", "contraction"};
  t.meta["eta"] = base.eta;
  t.meta["zeta"] = base.zeta();
  t.meta["target_theta_plus"] = target;

  auto at = [&](double d) {
    PhysicalParams p = base;
    p.delta = d;
    return p;
  };
  std::vector<double> deltas(range.points);
  std::vector<std::optional<double>> mismatch(range.points);
  for (int i = 0; i < range.points; ++i) {
    deltas[i] = range.from + (range.to - range.from) * i / (range.points - 1);
    const PhysicalParams p = at(deltas[i]);
    const auto ph = try_phases(p);
    const BsMatrix m = build_matrix(p);
    t.rows.push_back({deltas[i], deltas[i] * kGamma13MHz, nullable(ph ? std::optional(ph->theta1) : std::nullopt),
                      nullable(ph ? std::optional(ph->theta2) : std::nullopt),
                      nullable(ph ? std::optional(ph->theta_plus) : std::nullopt),
                      m.singular_values().sigma1, m.is_contraction()});
    if (ph) mismatch[i] = fold_angle(ph->theta_plus - target);
  }
  // Continuous sign changes of the folded mismatch are the target crossings.
  ordered_json roots = ordered_json::array();
  for (int i = 1; i < range.points; ++i) {
    if (!mismatch[i] || !mismatch[i - 1]) continue;
    const double f0 = *mismatch[i - 1], f1 = *mismatch[i];
    if (f0 * f1 > 0.0 || std::abs(f0) > kPi / 2 || std::abs(f1) > kPi / 2) continue;
    if (f0 == 0.0) {
      roots.push_back(deltas[i - 1]);
      continue;
    }
    auto f = [&](double d) {
      const auto ph = try_phases(at(d));
      return ph ? fold_angle(ph->theta_plus - target) : std::numeric_limits<double>::quiet_NaN();
    };
    const bool ascending = deltas[i - 1] < deltas[i];
    const double lo = ascending ? deltas[i - 1] : deltas[i];
    const double hi = ascending ? deltas[i] : deltas[i - 1];
    boost::uintmax_t iters = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, ascending ? f0 : f1, ascending ? f1 : f0,
        boost::math::tools::eps_tolerance<double>(50), iters);
    roots.push_back(0.5 * (a + b));
  }
  t.meta["crossings_delta_gamma13_units"] = roots;
  write_table(*ctx.out, t, ctx.format(Format::Csv));
  return kExitOk;
}

// -------------------------------------------------------------------- g2

int cmd_g2(const Context& ctx) {
  const RunConfig c = select_configs(ctx.opt, {}).front();
  const BsMatrix m = c.matrix();
  ordered_json j;
  j["schema"] = "mpbs.g2/1";
  j["source"] = label(c);
  j["input_a"] = c.a.describe();
  j["input_b"] = c.b.describe();
  j["overlap"] = c.wavepacket.overlap();
  j["sigma1"] = m.singular_values().sigma1;
  j["contraction"] = m.is_contraction();
  const double analytic = g2_analytic(c.a, c.b, m, c.wavepacket);
  j["analytic"] = analytic;
  if (c.a.is_coherent() && c.b.is_magnon()) {
    j["analytic_approx_moments"] = g2_analytic(c.a, c.b, m, c.wavepacket, MomentConvention::Approximate);
  }
  try {
    const OracleG2 o = g2_oracle(c.a, c.b, m, c.nmax, c.wavepacket);
    j["oracle"] = o.g2;
    j["abs_diff"] = std::abs(o.g2 - analytic);
    j["nmax"] = o.nmax;
  } catch (const NotContraction& e) {
    j["oracle"] = j["abs_diff"] = j["nmax"] = nullptr;
    *ctx.err << "warning: oracle skipped: " << e.what() << '\n';
  }
  if (ctx.format(Format::Json) == Format::Json) {
    *ctx.out << j.dump(2) << '\n';
  } else {
    Table t{"mpbs.g2/1", {}, {"key", "value"}, {}};
    const ordered_json flat = j.flatten();
    for (const auto& [k, v] : flat.items()) {
      if (k != "/schema") t.rows.push_back({k, v});
    }
    write_table(*ctx.out, t, Format::Csv);
  }
  return kExitOk;
}

// ------------------------------------------------------------------ fig3

std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  for (int i = 0; i < 25; ++i) g.push_back(0.005 * std::pow(200.0, i / 24.0));
  return g;
}

int cmd_fig3(const Context& ctx) {
  const auto configs = select_configs(ctx.opt, {"fig3a", "fig3b"});
  Table t;
  t.schema = "mpbs.fig3/1";
  t.columns = {"source", "alpha2", "alpha2_bs", "theory", "analytic", "mc_g2", "mc_sigma",
               "mc_one_sided", "n_gtr_I", "n_gtr_II", "n_gtr_III", "n_g"};
  for (const RunConfig& c : configs) {
    const BsMatrix m = c.matrix();
    std::vector<double> alphas = c.alpha2;
    if (alphas.empty()) {
      // The default grid spans the same intensities at the beamsplitter under either reading.
      alphas = default_alpha_grid();
      if (c.interpretation == AlphaInterpretation::PostCollection) {
        for (double& a : alphas) a *= c.chain.overall();
      }
    }
    CountingConfig cc;
    cc.matrix = m;
    cc.magnon = c.b;
    cc.chain = c.chain;
    cc.trials = c.trials;
    cc.herald_probability = c.herald_probability;
    cc.wavepacket = c.wavepacket;
    cc.nmax = c.nmax;
    for (const AlphaSweepRow& r : sweep_alpha(cc, alphas, c.interpretation)) {
      t.rows.push_back({label(c), r.alpha2, r.alpha2_bs, r.theory, r.analytic, r.estimate.g2,
                        r.estimate.sigma, r.estimate.one_sided, r.part_i.n_gtr, r.part_ii.n_gtr,
                        r.part_iii.n_gtr, r.part_i.n_g});
    }
    if (const auto* nm = std::get_if<NonidealMagnon>(&c.b.variant()); nm && c.coefficients) {
      const double p1 = nm->p1;
      const double g2m = 2.0 * nm->p2 / (p1 * p1);
      const double limit = std::cos(c.coefficients->theta_plus) >= 0.0 ? 1.5 : 0.5;
      const double eff = c.chain.overall();
      ordered_json info;
      info["classical_limit"] = limit;
      info["theory_crossings_alpha2_bs"] = g2_mixed_crossings(*c.coefficients, p1, g2m, limit);
      ordered_json post = ordered_json::array();
      for (double x : g2_mixed_crossings(*c.coefficients, p1, g2m, limit, 1e-3, 1.0 / eff)) {
        post.push_back(x * eff);
      }
      info["theory_crossings_alpha2_post_collection"] = post;
      const MixedDenominator den = mixed_denominator(*c.coefficients, p1, g2m);
      const double star = den.minimiser();
      info["extremum_alpha2_bs"] = star;
      info["extremum_theory"] = g2_mixed(*c.coefficients, star, p1, g2m);
      t.meta[label(c)] = info;
    }
  }
  t.meta["trials_per_part"] = configs.front().trials;
  t.meta["seed"] = configs.front().chain.seed;
  write_table(*ctx.out, t, ctx.format(Format::Csv));
  return kExitOk;
}

// --------------------------------------------------------------- fringes

int cmd_fringes(const Context& ctx) {
  const auto configs = select_configs(ctx.opt, {"fig2a", "fig2b", "fig2c"});
  Table t;
  t.schema = "mpbs.fringes/1";
  t.columns = {"source", "phi", "light", "magnon", "light_fit", "magnon_fit"};
  for (const RunConfig& c : configs) {
    const Resolved r = resolve_best_effort(c, *ctx.err);
    const auto grid = uniform_phase_grid(c.fringes.points);
    const FringeScan s = first_order_fringes(r.params, c.fringes.m0, c.fringes.alpha, grid, c.fringes.use_ode);
    auto model = [](const SinusoidFit& f, double x) { return f.offset + f.amplitude * std::cos(x + f.phase); };
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.rows.push_back({label(c), grid[i], s.light[i], s.magnon[i], model(s.light_fit, grid[i]),
                        model(s.magnon_fit, grid[i])});
    }
    const bool flat = s.light_fit.amplitude < 1e-12 || s.magnon_fit.amplitude < 1e-12;
    const double matrix_theta = build_matrix(r.params).phases().theta_plus;
    ordered_json info;
    info["zeta"] = r.params.zeta();
    info["delta_gamma13_units"] = r.params.delta;
    info["eta"] = r.params.eta;
    info["target_theta_plus"] = nullable(r.target);
    info["target_attained"] = r.attained;
    info["theta_plus_matrix"] = matrix_theta;
    info["flat"] = flat;
    info["theta_plus_fit"] = flat ? ordered_json() : ordered_json(s.theta_plus);
    info["fit_error"] = flat ? ordered_json() : ordered_json(angular_distance(s.theta_plus, matrix_theta));
    info["light_residual"] = s.light_fit.residual;
    info["magnon_residual"] = s.magnon_fit.residual;
    t.meta[label(c)] = info;
  }
  write_table(*ctx.out, t, ctx.format(Format::Csv));
  return kExitOk;
}

// --------------------------------------------------------------- storage

int cmd_storage(const Context& ctx) {
  const RunConfig c = select_configs(ctx.opt, {"fig3a"}).front();
  std::vector<double> times = c.times;
  if (times.empty()) {
    for (int i = 0; i <= 12; ++i) times.push_back(0.5 * i);
  }
  CountingConfig cc;
  cc.matrix = c.matrix();
  cc.photon = c.a;
  cc.magnon = c.b;
  cc.chain = c.chain;
  cc.trials = c.trials;
  cc.herald_probability = c.herald_probability;
  cc.wavepacket = c.wavepacket;
  cc.nmax = c.nmax;
  Table t;
  t.schema = "mpbs.storage/1";
  t.columns = {"time_us", "p0", "p1", "p2", "g2", "sigma", "g2_m", "sigma_m", "g2_p", "sigma_p", "analytic"};
  t.meta["law"] = c.decay.law == MagnonDecayModel::Law::Exponential ? "exponential" : "gaussian";
  t.meta["time_constant_us"] = c.decay.time_constant;
  t.meta["trials_per_part"] = c.trials;
  t.meta["seed"] = c.chain.seed;
  const auto value = [](const std::optional<G2Estimate>& e) { return e ? ordered_json(e->g2) : ordered_json(); };
  const auto sigma = [](const std::optional<G2Estimate>& e) { return e ? ordered_json(e->sigma) : ordered_json(); };
  for (const StorageRow& r : storage_sweep(cc, c.decay, times)) {
    t.rows.push_back({r.time, r.magnon.p0, r.magnon.p1, r.magnon.p2, value(r.g2), sigma(r.g2), value(r.g2_m),
                      sigma(r.g2_m), value(r.g2_p), sigma(r.g2_p), r.analytic});
  }
  write_table(*ctx.out, t, ctx.format(Format::Csv));
  return kExitOk;
}

// ----------------------------------------------------------------- count

ordered_json record_json(const CoincidenceRecord& r) {
  return {{"schema", "mpbs.record/1"}, {"part", part_name(r.part)}, {"N_G", r.n_g},
          {"N_GT", r.n_gt},           {"N_GR", r.n_gr},            {"N_GTR", r.n_gtr},
          {"trials", r.trials},       {"seed", r.seed},            {"config_id", r.config_id}};
}

int cmd_count(const Context& ctx) {
  const RunConfig c = select_configs(ctx.opt, {}).front();
  CountingConfig cc;
  cc.matrix = c.matrix();
  cc.photon = c.a;
  cc.magnon = c.b;
  cc.chain = c.chain;
  cc.trials = c.trials;
  cc.herald_probability = c.herald_probability;
  cc.wavepacket = c.wavepacket;
  cc.nmax = c.nmax;
  const CoincidenceRecord r1 = run_part(Part::I, cc);
  const CoincidenceRecord r2 = run_part(Part::II, cc);
  const CoincidenceRecord r3 = run_part(Part::III, cc);
  for (const auto* r : {&r1, &r2, &r3}) *ctx.out << record_json(*r).dump() << '\n';
  const G2Estimate e = g2_interference_from_counts(r1, r2, r3);
  ordered_json s = {{"schema", "mpbs.estimate/1"}, {"g2", e.g2}, {"sigma", e.sigma},
                    {"one_sided", e.one_sided}};
  try {
    s["analytic"] = g2_analytic(c.a, c.b, cc.matrix, c.wavepacket);
  } catch (const DomainError&) {
    s["analytic"] = nullptr;
  }
  *ctx.out << s.dump() << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- selfcheck

struct SuiteResult {
  bool pass = true;
  double worst = 0.0;
  double tolerance = 0.0;
};

BsMatrix random_contraction(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Matrix2c a;
  for (int i = 0; i < 4; ++i) a(i / 2, i % 2) = Complex(n(rng), n(rng));
  const double s1 = singular_values(a).sigma1;
  return BsMatrix(Matrix2c(a * (u(rng) / s1)));
}

InputState random_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (rng() % 3) {
    case 0: return InputState::coherent(std::polar(std::sqrt(0.01 + 0.99 * u(rng)), kTwoPi * u(rng)));
    case 1: return InputState::ideal_single();
    default: {
      const double p1 = 0.05 + 0.5 * u(rng);
      const double p2 = 0.2 * u(rng) * p1;
      return InputState::nonideal_magnon(1.0 - p1 - p2, p1, p2);
    }
  }
}

int cmd_selfcheck(const Context& ctx) {
  const double scale = ctx.opt.tolerance_scale;
  auto check = [](SuiteResult& s, double err, double tol) {
    s.worst = std::max(s.worst, err);
    s.tolerance = tol;
    if (!(err < tol)) s.pass = false;
  };
  const auto start = std::chrono::steady_clock::now();
  bool all = true;
  auto report = [&](std::string_view name, const SuiteResult& s) {
    all = all && s.pass;
    *ctx.out << fmt::format("{} {} (worst {:.3e}, tolerance {:.1e})\n", s.pass ? "PASS" : "FAIL", name,
                            s.worst, s.tolerance);
  };

  SuiteResult oracle;
  for (const auto* p : {&on_resonance_preset(), &off_resonance_preset()}) {
    const auto a = InputState::coherent_with_mean(p->alpha2_dot);
    const auto b = p->magnon();
    const auto m = p->coefficients.matrix();
    check(oracle, std::abs(g2_oracle(a, b, m, kMaxTruncation).g2 - g2_analytic(a, b, m)), 1e-9 * scale);
  }
  std::mt19937_64 rng(20260101);
  for (int i = 0; i < 10; ++i) {
    const BsMatrix m = random_contraction(rng);
    const InputState a = random_input(rng), b = random_input(rng);
    check(oracle, std::abs(g2_oracle(a, b, m).g2 - g2_analytic(a, b, m)), 1e-6 * scale);
  }
  report("oracle-equivalence", oracle);

  SuiteResult ode;
  for (const auto& [delta, zeta, eta] : {std::tuple{0.0, 1.0, 1.0}, std::tuple{-16.667, 2.0, 3.0},
                                         std::tuple{-3.0, 0.5, 0.2}, std::tuple{2.0, 4.0, 1.5}}) {
    PhysicalParams p;
    p.delta = delta;
    p.eta = eta;
    check(ode, verify_matrix(p.with_zeta(zeta)), 1e-6 * scale);
  }
  report("ode-equivalence", ode);

  SuiteResult hom;
  const double h = 1.0 / std::sqrt(2.0);
  const BsMatrix anti = BsMatrix::from_components(h, h, h, h, kPi, 0.0);
  // A lossless 50:50 split forces theta+ = pi; the theta+ = 0 twin is passive at half amplitude.
  const BsMatrix bunch = BsMatrix::from_components(0.5, 0.5, 0.5, 0.5, 0.0, 0.0);
  const auto one = InputState::ideal_single();
  const auto coh = InputState::coherent_with_mean(0.3);
  check(hom, std::abs(g2_analytic(one, one, anti)), 1e-12 * scale);
  check(hom, std::abs(g2_analytic(one, one, bunch) - 2.0), 1e-12 * scale);
  check(hom, std::abs(g2_analytic(coh, coh, anti) - 0.5), 1e-12 * scale);
  check(hom, std::abs(g2_oracle(one, one, anti).g2), 1e-12 * scale);
  check(hom, std::abs(g2_oracle(one, one, bunch).g2 - 2.0), 1e-12 * scale);
  report("hom-fixed-points", hom);

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  *ctx.out << fmt::format("{} selfcheck ({:.2f} s)\n", all ? "PASS" : "FAIL", secs);
  return all ? kExitOk : kExitSelfcheckFailed;
}

void print_explain(const Context& ctx) {
  const std::vector<std::string> names =
      ctx.opt.preset.empty() ? preset_names() : std::vector<std::string>{ctx.opt.preset};
  for (const auto& n : names) *ctx.out << n << ": " << preset_config(n).explain << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{{}, &out, &err};
  Options& o = ctx.opt;
  CLI::App app{"Non-Hermitian magnon-photon beamsplitter lab", "mpbs"};
  app.require_subcommand(0, 1);
  app.add_option("--config", o.config_path, "JSON config document")->check(CLI::ExistingFile);
  app.add_option("--preset", o.preset, "fig2a|fig2b|fig2c|fig3a|fig3b")
      ->check(CLI::IsMember(preset_names()));
  app.add_option("--seed", o.seed, "64-bit RNG seed");
  app.add_option("--trials", o.trials, "Monte Carlo trials per part")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out_path, "write output to a file instead of stdout");
  app.add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--alpha-interpretation", o.alpha_interpretation, "pre-collection|post-collection")
      ->check(CLI::IsMember({"pre-collection", "post-collection"}));
  app.add_flag("--explain", o.explain, "print preset provenance and exit");

  using Handler = int (*)(const Context&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    commands.emplace_back(sub, h);
    return sub;
  };
  add("matrix", "beamsplitter matrix, phases and contraction status", cmd_matrix);
  add("phase-sweep", "phases versus single-photon detuning", cmd_phase_sweep);
  add("g2", "analytic and brute-force g2(0)", cmd_g2);
  add("fig3", "g2(0) versus probe intensity: theory and Monte Carlo", cmd_fig3);
  add("fringes", "first-order interference fringes and fitted phase sum", cmd_fringes);
  add("storage", "g2(0) versus storage time under a magnon decay model", cmd_storage);
  add("count", "gated counting records as JSON lines", cmd_count);
  CLI::App* self = add("selfcheck", "oracle, ODE and HOM self-check suites", cmd_selfcheck);
  self->add_option("--tolerance-scale", o.tolerance_scale, "multiplies every suite tolerance");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::ofstream file;
  if (!o.out_path.empty()) {
    file.open(o.out_path);
    if (!file) {
      err << "error: cannot open output file " << o.out_path << '\n';
      return kExitConfig;
    }
    ctx.out = &file;
  }

  try {
    if (o.explain) {
      print_explain(ctx);
      return kExitOk;
    }
    for (const auto& [sub, handler] : commands) {
      if (sub->parsed()) return handler(ctx);
    }
    out << app.help();
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace mpbs::cli
