#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptfric/params.hpp"

namespace ptf {

enum class RunMode { quantum_closed, quantum_open, classical, sweep, spectrum, bath_rates };

std::string to_string(RunMode m);

struct SweepSpec {
  std::vector<double> velocities;  // in units of nu, strictly increasing
  std::vector<RunMode> modes{RunMode::quantum_open, RunMode::classical};
  double periods = 1.0;
};

struct RunConfig {
  RunMode mode = RunMode::quantum_closed;
  SystemParams system = make_system_params(5.0, 1.0, 0.005);
  BathParams bath;
  NumericsParams numerics;
  std::optional<ChainParams> chain;
  std::string output_dir = "out";
  long samples_per_period = 1000;  // output stride T/1000
  bool renormalize_trace = false;
  bool geometric_phase = true;
  int n_levels = 5;
  double classical_dt = 0.0;  // 0 selects the default step
  bool classical_noise = true;  // false: theta = 0 and a single trajectory
  SweepSpec sweep;
  int spectrum_points = 1001;
  double rates_e_min = -5.0, rates_e_max = 5.0;
  int rates_points = 1001;
  int threads = 1;

  // key=value pairs covering every resolved setting, in a stable order
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Flat key=value grammar: one assignment per line, '#' starts a comment, blank lines ignored.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// 20 log-spaced points over [1e-3, 1].
std::vector<double> default_sweep_grid();

// Locale-independent; precision 0 gives the shortest representation that round-trips.
std::string format_number(double x, int precision = 12);

}  // namespace ptf
