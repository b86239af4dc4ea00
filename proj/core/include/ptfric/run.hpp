#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptfric/config.hpp"
#include "ptfric/observables.hpp"
#include "ptfric/propagator.hpp"

namespace ptf {

inline constexpr const char* trajectory_header =
    "t_bar,t_over_T,E_avg,P0,P1,P2,P3,P4,S_L,x_avg,x_c,v_avg,sx_sp,F_L_norm,W,Q,P_released,gamma_phase";
inline constexpr const char* sweep_header = "v_over_nu,mode,P_released_end,t_slip_over_T,F_L_max_norm";

struct RunResult {
  std::vector<TrajectoryRecord> records;  // NaN marks a column the mode does not produce
  double t_slip_over_T = 0.0;             // signed argmax of F_L in the first period
  double F_L_max_norm = 0.0;
  double P_released_end = 0.0;  // -Q/t at t = T (or at the end when shorter)
  double dt_bar = 0.0;
  long steps = 0;
  double max_trace_dev = 0.0;  // quantum runs: max |Tr rho - 1| over outputs
  double min_eig = 0.0;        // quantum runs: most negative density-matrix eigenvalue
  bool aborted = false;
  std::string message;
};

RunResult run_quantum(const RunConfig& cfg, QuantumMode mode);
RunResult run_classical(const RunConfig& cfg);

struct SweepRow {
  double v_over_nu = 0.0;
  RunMode mode = RunMode::quantum_open;
  double P_released_end = 0.0;
  double t_slip_over_T = 0.0;
  double F_L_max_norm = 0.0;
  bool aborted = false;
  std::string message;
};

// Rows sorted by (v, mode), independent of cfg.threads.
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
// t_bar,t_over_T,E0..E{levels-1} over one period
void write_spectrum_csv(std::ostream& out, const RunConfig& cfg);
void write_anticrossings_csv(std::ostream& out, const RunConfig& cfg);
void write_slip_times_csv(std::ostream& out, const RunConfig& cfg);
// E,gamma,sigma
void write_bath_rates_csv(std::ostream& out, const RunConfig& cfg);

struct RunStatus {
  int exit_code = 0;  // 0 success, 3 numeric abort
  std::string message;
  std::vector<std::string> files;
};

// Runs cfg.mode, writing CSVs and manifest.txt into cfg.output_dir.
RunStatus run(const RunConfig& cfg);

}  // namespace ptf
