#include "ptfric/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ptf {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, int line) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + v + "'", line);
  return x;
}

long to_long(const std::string& key, const std::string& v, int line) {
  long x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + v + "'", line);
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v, int line) {
  std::uint64_t x = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an unsigned integer, got '" + v + "'", line);
  return x;
}

bool to_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'", line);
}

RunMode to_mode(const std::string& key, const std::string& v, int line) {
  if (v == "quantum-closed" || v == "closed") return RunMode::quantum_closed;
  if (v == "quantum-open" || v == "open") return RunMode::quantum_open;
  if (v == "classical") return RunMode::classical;
  throw ConfigError(key + ": unknown mode '" + v + "'", line);
}

}  // namespace

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::quantum_closed: return "quantum-closed";
    case RunMode::quantum_open: return "quantum-open";
    case RunMode::classical: return "classical";
    case RunMode::sweep: return "sweep";
    case RunMode::spectrum: return "spectrum";
    case RunMode::bath_rates: return "bath-rates";
  }
  return "unknown";
}

std::string format_number(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = precision > 0
                             ? std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, precision)
                             : std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<double> default_sweep_grid() {
  std::vector<double> g;
  for (int k = 0; k < 20; ++k) g.push_back(std::pow(10.0, -3.0 + 3.0 * k / 19.0));
  return g;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  c.sweep.velocities = default_sweep_grid();
  double u0 = 5.0, kappa = 1.0, v = 0.005;
  bool u0_set = false;
  std::map<std::string, std::pair<double, int>> chain_keys;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + s + "'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (seen.count(key)) throw ConfigError("duplicate key " + key + " (first set on line " +
                                               std::to_string(seen[key]) + ")", line);
    seen[key] = line;

    if (key.rfind("run.", 0) == 0 || key.rfind("derived.", 0) == 0 || key.rfind("result.", 0) == 0 ||
        key.rfind("markov.", 0) == 0) {
      // manifest bookkeeping, ignored on input so a manifest can be fed back as a config
    } else if (key == "system.u0") {
      u0 = to_double(key, val, line);
      u0_set = true;
      if (u0 < 0) throw ConfigError("system.u0 must be >= 0", line);
    } else if (key == "system.kappa") {
      kappa = to_double(key, val, line);
      if (!(kappa > 0)) throw ConfigError("system.kappa must be > 0", line);
    } else if (key == "drive.v") {
      v = to_double(key, val, line);
      if (!(v > 0)) throw ConfigError("drive.v must be > 0", line);
    } else if (key == "bath.alpha") {
      c.bath.alpha = to_double(key, val, line);
      if (c.bath.alpha < 0) throw ConfigError("bath.alpha must be >= 0", line);
    } else if (key == "bath.omega_c") {
      c.bath.omega_c = to_double(key, val, line);
      if (!(c.bath.omega_c > 0)) throw ConfigError("bath.omega_c must be > 0", line);
    } else if (key == "bath.theta") {
      c.bath.theta = to_double(key, val, line);
      if (c.bath.theta < 0) throw ConfigError("bath.theta must be >= 0", line);
    } else if (key == "numerics.n_size") {
      c.numerics.n_size = static_cast<int>(to_long(key, val, line));
      if (c.numerics.n_size < 5) throw ConfigError("numerics.n_size must be >= 5", line);
    } else if (key == "numerics.dt") {
      c.numerics.dt_bar = to_double(key, val, line);
      if (c.numerics.dt_bar < 0) throw ConfigError("numerics.dt must be > 0 (or 0 for the default)", line);
    } else if (key == "numerics.periods") {
      c.numerics.t_max_periods = to_double(key, val, line);
      if (!(c.numerics.t_max_periods > 0)) throw ConfigError("numerics.periods must be > 0", line);
    } else if (key == "numerics.ensemble") {
      c.numerics.ensemble = static_cast<int>(to_long(key, val, line));
      if (c.numerics.ensemble < 1) throw ConfigError("numerics.ensemble must be >= 1", line);
    } else if (key == "numerics.seed") {
      c.numerics.seed = to_u64(key, val, line);
    } else if (key == "numerics.threads") {
      c.threads = static_cast<int>(to_long(key, val, line));
      if (c.threads < 1) throw ConfigError("numerics.threads must be >= 1", line);
    } else if (key == "classical.dt") {
      c.classical_dt = to_double(key, val, line);
      if (c.classical_dt < 0) throw ConfigError("classical.dt must be >= 0", line);
    } else if (key == "classical.noise") {
      c.classical_noise = to_bool(key, val, line);
    } else if (key == "quantum.mode") {
      c.mode = to_mode(key, val, line);
      if (c.mode == RunMode::classical) throw ConfigError("quantum.mode must be closed or open", line);
    } else if (key == "quantum.renormalize_trace") {
      c.renormalize_trace = to_bool(key, val, line);
    } else if (key == "quantum.geometric_phase") {
      c.geometric_phase = to_bool(key, val, line);
    } else if (key == "output.dir") {
      c.output_dir = val;
    } else if (key == "output.samples_per_period") {
      c.samples_per_period = to_long(key, val, line);
      if (c.samples_per_period < 1) throw ConfigError("output.samples_per_period must be >= 1", line);
    } else if (key == "output.levels") {
      c.n_levels = static_cast<int>(to_long(key, val, line));
      if (c.n_levels < 1 || c.n_levels > 5) throw ConfigError("output.levels must be in [1, 5]", line);
    } else if (key == "sweep.velocities") {
      c.sweep.velocities.clear();
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) c.sweep.velocities.push_back(to_double(key, trim(item), line));
      if (c.sweep.velocities.empty()) throw ConfigError("sweep.velocities is empty", line);
      for (std::size_t i = 0; i < c.sweep.velocities.size(); ++i) {
        if (!(c.sweep.velocities[i] > 0)) throw ConfigError("sweep.velocities must be > 0", line);
        if (i > 0 && !(c.sweep.velocities[i] > c.sweep.velocities[i - 1]))
          throw ConfigError("sweep.velocities must be strictly increasing", line);
      }
    } else if (key == "sweep.modes") {
      c.sweep.modes.clear();
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) c.sweep.modes.push_back(to_mode(key, trim(item), line));
      if (c.sweep.modes.empty()) throw ConfigError("sweep.modes is empty", line);
    } else if (key == "sweep.periods") {
      c.sweep.periods = to_double(key, val, line);
      if (!(c.sweep.periods > 0)) throw ConfigError("sweep.periods must be > 0", line);
    } else if (key == "spectrum.points") {
      c.spectrum_points = static_cast<int>(to_long(key, val, line));
      if (c.spectrum_points < 3) throw ConfigError("spectrum.points must be >= 3", line);
    } else if (key == "rates.e_min") {
      c.rates_e_min = to_double(key, val, line);
    } else if (key == "rates.e_max") {
      c.rates_e_max = to_double(key, val, line);
    } else if (key == "rates.points") {
      c.rates_points = static_cast<int>(to_long(key, val, line));
      if (c.rates_points < 2) throw ConfigError("rates.points must be >= 2", line);
    } else if (key.rfind("chain.", 0) == 0) {
      const std::string f = key.substr(6);
      if (f != "a" && f != "d" && f != "A_s" && f != "d_s" && f != "C_6") throw ConfigError("unknown key " + key, line);
      chain_keys[f] = {to_double(key, val, line), line};
    } else {
      throw ConfigError("unknown key " + key, line);
    }
  }

  if (!(c.rates_e_max > c.rates_e_min)) throw ConfigError("rates.e_max must exceed rates.e_min");
  if (!chain_keys.empty()) {
    ChainParams ch;
    for (const char* f : {"a", "d", "A_s", "d_s", "C_6"})
      if (!chain_keys.count(f)) throw ConfigError(std::string("missing required key chain.") + f);
    ch.a = chain_keys["a"].first;
    ch.d = chain_keys["d"].first;
    ch.A_s = chain_keys["A_s"].first;
    ch.d_s = chain_keys["d_s"].first;
    ch.C_6 = chain_keys["C_6"].first;
    try {
      ch.validate();
      c.system = build_system_params(ch, u0_set ? std::optional<double>(u0) : std::nullopt, v);
      if (seen.count("system.kappa")) throw ConfigError("system.kappa conflicts with chain.a", seen["system.kappa"]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.chain = ch;
  } else {
    c.system = make_system_params(u0, kappa, v);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

namespace {
std::string format_exact(double x) { return format_number(x, 0); }
}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
  std::vector<std::pair<std::string, std::string>> r;
  auto add = [&r](std::string k, std::string v) { r.emplace_back(std::move(k), std::move(v)); };
  add("run.mode", to_string(mode));
  add("system.u0", format_exact(system.u0));
  add(chain ? "derived.kappa" : "system.kappa", format_exact(system.kappa));
  add("derived.eta", format_exact(system.eta));
  add("drive.v", format_exact(system.v_bar));
  add("derived.T_bar", format_exact(system.T_bar));
  if (chain) {
    add("chain.a", format_exact(chain->a));
    add("chain.d", format_exact(chain->d));
    add("chain.A_s", format_exact(chain->A_s));
    add("chain.d_s", format_exact(chain->d_s));
    add("chain.C_6", format_exact(chain->C_6));
  }
  add("bath.alpha", format_exact(bath.alpha));
  add("bath.omega_c", format_exact(bath.omega_c));
  add("bath.theta", format_exact(bath.theta));
  add("numerics.n_size", std::to_string(numerics.n_size));
  add("numerics.dt", format_exact(numerics.dt_bar));
  add("numerics.periods", format_exact(numerics.t_max_periods));
  add("numerics.ensemble", std::to_string(numerics.ensemble));
  add("numerics.seed", std::to_string(numerics.seed));
  add("numerics.threads", std::to_string(threads));
  add("classical.dt", format_exact(classical_dt));
  add("classical.noise", classical_noise ? "true" : "false");
  add("output.dir", output_dir);
  add("quantum.mode", mode == RunMode::quantum_open ? "open" : "closed");
  add("quantum.renormalize_trace", renormalize_trace ? "true" : "false");
  add("quantum.geometric_phase", geometric_phase ? "true" : "false");
  add("output.samples_per_period", std::to_string(samples_per_period));
  add("output.levels", std::to_string(n_levels));
  std::string vs, ms;
  for (double v : sweep.velocities) vs += (vs.empty() ? "" : ",") + format_exact(v);
  for (RunMode m : sweep.modes) ms += (ms.empty() ? "" : ",") + to_string(m);
  add("sweep.velocities", vs);
  add("sweep.modes", ms);
  add("sweep.periods", format_exact(sweep.periods));
  add("spectrum.points", std::to_string(spectrum_points));
  add("rates.e_min", format_exact(rates_e_min));
  add("rates.e_max", format_exact(rates_e_max));
  add("rates.points", std::to_string(rates_points));
  return r;
}

}  // namespace ptf
