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

#include "mpbs/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "mpbs/angles.hpp"
#include "mpbs/errors.hpp"
#include "mpbs/presets.hpp"

namespace mpbs {
namespace {

using nlohmann::json;

void allow_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> keys) {
  if (!j.is_object()) throw InvalidConfig(fmt::format("{} must be an object", where));
  const std::set<std::string_view> allowed(keys);
  for (const auto& [k, v] : j.items()) {
    if (!allowed.contains(k)) throw InvalidConfig(fmt::format("unknown key '{}' in {}", k, where));
  }
}

double number(const json& j, std::string_view key) {
  const json& v = j.at(std::string(key));
  if (!v.is_number()) throw InvalidConfig(fmt::format("'{}' must be a number", key));
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InvalidConfig(fmt::format("'{}' must be finite", key));
  return x;
}

double number_or(const json& j, std::string_view key, double fallback) {
  return j.contains(std::string(key)) ? number(j, key) : fallback;
}

double tagged_frequency(const json& j, std::string_view key) {
  const json& v = j.at(std::string(key));
  if (!v.is_object() || !v.contains("value") || !v.contains("unit")) {
    throw InvalidConfig(fmt::format(
        "'{}' needs an explicit unit: {{\"value\": x, \"unit\": \"MHz\"|\"gamma13_units\"}}", key));
  }
  allow_keys(v, key, {"value", "unit"});
  return frequency_in_gamma13(number(v, "value"), v.at("unit").get<std::string>());
}

InputState parse_input(const json& j, std::string_view where) {
  if (!j.is_object() || !j.contains("kind")) {
    throw InvalidConfig(fmt::format("{} needs a 'kind'", where));
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "coherent") {
    allow_keys(j, where, {"kind", "alpha2", "phase"});
    const double a2 = number(j, "alpha2");
    if (a2 < 0.0) throw InvalidConfig("alpha2 must be >= 0");
    return InputState::coherent(std::polar(std::sqrt(a2), number_or(j, "phase", 0.0)));
  }
  if (kind == "single") {
    allow_keys(j, where, {"kind"});
    return InputState::ideal_single();
  }
  if (kind == "vacuum") {
    allow_keys(j, where, {"kind"});
    return InputState::vacuum();
  }
  if (kind == "magnon") {
    allow_keys(j, where, {"kind", "p0", "p1", "p2", "g2m"});
    if (j.contains("g2m")) {
      if (j.contains("p0") || j.contains("p2")) {
        throw InvalidConfig("give either (p1, g2m) or (p0, p1, p2) for a magnon");
      }
      return InputState::magnon_from_g2m(number(j, "p1"), number(j, "g2m"));
    }
    return InputState::nonideal_magnon(number(j, "p0"), number(j, "p1"), number(j, "p2"));
  }
  throw InvalidConfig(fmt::format("unknown input kind '{}'", kind));
}

std::vector<double> parse_grid(const json& j, std::string_view where) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw InvalidConfig(fmt::format("{} entries must be numbers", where));
      out.push_back(v.get<double>());
    }
    return out;
  }
  allow_keys(j, where, {"from", "to", "points", "scale"});
  const double from = number(j, "from");
  const double to = number(j, "to");
  const int n = j.at("points").get<int>();
  const std::string scale = j.value("scale", "linear");
  if (n < 1) throw InvalidConfig(fmt::format("{} needs at least one point", where));
  if (scale != "linear" && scale != "log") throw InvalidConfig("scale must be linear or log");
  if (scale == "log" && (from <= 0.0 || to <= 0.0)) throw InvalidConfig("log grid needs positive ends");
  for (int i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    out.push_back(scale == "log" ? from * std::pow(to / from, f) : from + (to - from) * f);
  }
  return out;
}

void parse_physical(const json& j, RunConfig& c) {
  allow_keys(j, "physical",
             {"eta", "tau_p", "delta", "omega_c", "gamma12", "zeta", "target_theta_plus"});
  PhysicalSpec s;
  s.params.eta = number(j, "eta");
  s.params.tau_p = number_or(j, "tau_p", 1.0);
  s.params.delta = j.contains("delta") ? tagged_frequency(j, "delta") : 0.0;
  s.params.gamma12 = j.contains("gamma12") ? tagged_frequency(j, "gamma12") : 0.0;
  const int drives = j.contains("omega_c") + j.contains("zeta") + j.contains("target_theta_plus");
  if (drives != 1) {
    throw InvalidConfig("physical needs exactly one of omega_c, zeta, target_theta_plus");
  }
  if (j.contains("omega_c")) s.params.omega_c = tagged_frequency(j, "omega_c");
  if (j.contains("zeta")) s.zeta = number(j, "zeta");
  if (j.contains("target_theta_plus")) s.target_theta_plus = number(j, "target_theta_plus");
  c.physical = s;
}

void parse_coefficients(const json& j, RunConfig& c) {
  allow_keys(j, "coefficients", {"t2", "r2", "tau2", "rho2", "theta_plus"});
  Coefficients k{number(j, "t2"), number(j, "r2"), number(j, "tau2"), number(j, "rho2"),
                 number_or(j, "theta_plus", 0.0)};
  for (double v : {k.t2, k.r2, k.tau2, k.rho2}) {
    if (v < 0.0) throw InvalidConfig("intensity coefficients must be >= 0");
  }
  c.coefficients = k;
}

}  // namespace

double frequency_in_gamma13(double value, std::string_view unit) {
  if (!std::isfinite(value)) throw InvalidConfig("frequency must be finite");
  if (unit == "MHz") return mhz_to_gamma13_units(value);
  if (unit == "gamma13_units") return value;
  throw InvalidConfig(fmt::format("unknown frequency unit '{}' (use MHz or gamma13_units)", unit));
}

PhysicalParams RunConfig::resolved_params() const {
  if (!physical) throw InvalidConfig("command needs a physical section");
  PhysicalParams p = physical->params;
  if (physical->zeta) p = p.with_zeta(*physical->zeta);
  if (physical->target_theta_plus) p = p.with_zeta(solve_zeta_for_phase(p, *physical->target_theta_plus));
  return p;
}

BsMatrix RunConfig::matrix() const {
  if (coefficients) return coefficients->matrix();
  const PhysicalParams p = resolved_params();
  return p.zeta() == 0.0 ? build_matrix_zeta_limit(p) : build_matrix(p);
}

void RunConfig::validate() const {
  if (physical.has_value() == coefficients.has_value()) {
    throw InvalidConfig("supply exactly one of 'physical' and 'coefficients'");
  }
  if (physical) {
    physical->params.validate();
    if (physical->zeta && *physical->zeta < 0.0) throw InvalidConfig("zeta must be >= 0");
  }
  chain.validate();
  if (trials == 0) throw InvalidConfig("trials must be positive");
  if (!(herald_probability > 0.0 && herald_probability <= 1.0)) {
    throw InvalidConfig("herald_probability must lie in (0, 1]");
  }
  if (nmax != 0 && (nmax < 4 || nmax > kMaxTruncation)) {
    throw InvalidConfig(fmt::format("nmax must be 0 (auto) or in [4, {}]", kMaxTruncation));
  }
  for (double a : alpha2) {
    if (!(a > 0.0)) throw InvalidConfig("alpha2 sweep values must be positive");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || (i > 0 && times[i] < times[i - 1])) {
      throw InvalidConfig("storage times must be nonnegative and ascending");
    }
  }
  decay.validate();
  if (fringes.points < 8) throw InvalidConfig("fringe scans need at least 8 points");
  if (fringes.m0 < 0.0 || fringes.alpha < 0.0) throw InvalidConfig("fringe amplitudes must be >= 0");
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    allow_keys(j, "config", {"schema", "physical", "coefficients", "inputs", "wavepacket", "nmax",
                             "chain", "counting", "seed", "sweep", "storage", "fringes"});
    if (j.contains("schema") && j.at("schema") != "mpbs.config/1") {
      throw InvalidConfig("unsupported config schema (expected mpbs.config/1)");
    }
    if (j.contains("physical")) parse_physical(j.at("physical"), c);
    if (j.contains("coefficients")) parse_coefficients(j.at("coefficients"), c);
    if (j.contains("inputs")) {
      const json& in = j.at("inputs");
      allow_keys(in, "inputs", {"a", "b"});
      if (in.contains("a")) c.a = parse_input(in.at("a"), "inputs.a");
      if (in.contains("b")) c.b = parse_input(in.at("b"), "inputs.b");
    }
    if (j.contains("wavepacket")) {
      const json& w = j.at("wavepacket");
      allow_keys(w, "wavepacket", {"overlap", "delay", "width"});
      if (w.contains("overlap")) {
        c.wavepacket = WavepacketModel::with_overlap(number(w, "overlap"));
      } else {
        c.wavepacket = WavepacketModel::gaussian(number(w, "delay"), number(w, "width"));
      }
    }
    if (j.contains("nmax")) c.nmax = j.at("nmax").get<int>();
    if (j.contains("chain")) {
      const json& ch = j.at("chain");
      allow_keys(ch, "chain", {"fiber_eff", "spcm_eff", "etalon_eff", "dark_rate"});
      c.chain.fiber_eff = number_or(ch, "fiber_eff", c.chain.fiber_eff);
      c.chain.spcm_eff = number_or(ch, "spcm_eff", c.chain.spcm_eff);
      c.chain.etalon_eff = number_or(ch, "etalon_eff", c.chain.etalon_eff);
      c.chain.dark_rate = number_or(ch, "dark_rate", c.chain.dark_rate);
    }
    if (j.contains("counting")) {
      const json& ct = j.at("counting");
      allow_keys(ct, "counting", {"trials", "herald_probability", "alpha_interpretation"});
      if (ct.contains("trials")) c.trials = ct.at("trials").get<std::uint64_t>();
      c.herald_probability = number_or(ct, "herald_probability", 1.0);
      if (ct.contains("alpha_interpretation")) {
        const auto s = ct.at("alpha_interpretation").get<std::string>();
        if (s == "pre-collection") {
          c.interpretation = AlphaInterpretation::PreCollection;
        } else if (s == "post-collection") {
          c.interpretation = AlphaInterpretation::PostCollection;
        } else {
          throw InvalidConfig("alpha_interpretation must be pre-collection or post-collection");
        }
      }
    }
    if (j.contains("seed")) c.chain.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("sweep")) {
      const json& sw = j.at("sweep");
      allow_keys(sw, "sweep", {"alpha2", "delta"});
      if (sw.contains("alpha2")) c.alpha2 = parse_grid(sw.at("alpha2"), "sweep.alpha2");
      if (sw.contains("delta")) {
        const json& d = sw.at("delta");
        allow_keys(d, "sweep.delta", {"from", "to", "points", "unit"});
        if (!d.contains("unit")) throw InvalidConfig("sweep.delta needs a unit");
        const auto unit = d.at("unit").get<std::string>();
        c.delta_range = DeltaRange{frequency_in_gamma13(number(d, "from"), unit),
                                   frequency_in_gamma13(number(d, "to"), unit),
                                   d.at("points").get<int>()};
      }
    }
    if (j.contains("storage")) {
      const json& st = j.at("storage");
      allow_keys(st, "storage", {"times", "law", "time_constant", "background_p2"});
      if (st.contains("times")) c.times = parse_grid(st.at("times"), "storage.times");
      const std::string law = st.value("law", "exponential");
      if (law == "exponential") {
        c.decay.law = MagnonDecayModel::Law::Exponential;
      } else if (law == "gaussian") {
        c.decay.law = MagnonDecayModel::Law::Gaussian;
      } else {
        throw InvalidConfig("storage.law must be exponential or gaussian");
      }
      c.decay.time_constant = number_or(st, "time_constant", c.decay.time_constant);
      c.decay.background_p2 = number_or(st, "background_p2", c.decay.background_p2);
    }
    if (j.contains("fringes")) {
      const json& f = j.at("fringes");
      allow_keys(f, "fringes", {"m0", "alpha", "points", "use_ode"});
      c.fringes.m0 = number_or(f, "m0", c.fringes.m0);
      c.fringes.alpha = number_or(f, "alpha", c.fringes.alpha);
      c.fringes.points = f.value("points", c.fringes.points);
      c.fringes.use_ode = f.value("use_ode", c.fringes.use_ode);
    }
  } catch (const json::exception& e) {
    throw InvalidConfig(fmt::format("malformed config: {}", e.what()));
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig(fmt::format("cannot read config '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::string> preset_names() { return {"fig2a", "fig2b", "fig2c", "fig3a", "fig3b"}; }

RunConfig preset_config(std::string_view name) {
  RunConfig c;
  c.preset = std::string(name);
  if (auto p = find_coefficient_preset(name)) {
    c.coefficients = p->coefficients;
    c.a = InputState::coherent_with_mean(p->alpha2_dot);
    c.b = p->magnon();
    c.explain = p->explain;
    c.validate();
    return c;
  }
  if (auto f = find_fringe_preset(name)) {
    PhysicalSpec s;
    s.params.eta = f->eta;
    s.params.tau_p = f->tau_p;
    s.params.delta = mhz_to_gamma13_units(f->delta_mhz);
    s.target_theta_plus = f->target_theta_plus;
    c.physical = s;
    c.explain = f->explain;
    c.validate();
    return c;
  }
  throw InvalidConfig(fmt::format("unknown preset '{}'", name));
}

}  // namespace mpbs
