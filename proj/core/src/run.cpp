#include "ptfric/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "ptfric/classical.hpp"
#include "ptfric/spectrum.hpp"

#ifndef PTFRIC_VERSION
#define PTFRIC_VERSION "unknown"
#endif

namespace ptf {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string cell(double x) { return std::isnan(x) ? std::string() : format_number(x); }

long output_stride(long per_period, long samples) { return std::max(1L, per_period / samples); }

}  // namespace

RunResult run_quantum(const RunConfig& cfg, QuantumMode mode) {
  const SystemParams& p = cfg.system;
  const OperatorSet ops(p, cfg.numerics.n_size);
  const long per_period = steps_per_period(ops, cfg.numerics);
  const double dt = p.T_bar / per_period;
  const double T = p.T_bar;

  RunResult res;
  res.dt_bar = dt;
  res.F_L_max_norm = -std::numeric_limits<double>::infinity();

  const long out_stride = output_stride(per_period, cfg.samples_per_period);
  const long total_steps = std::lround(cfg.numerics.t_max_periods * per_period);
  // the phase connection is sampled every ~0.05 time units and at every output
  const long phase_stride = std::max(1L, static_cast<long>(0.05 / dt));
  WorkHeatAccumulator acc(p.v_bar);
  std::optional<GeometricPhase> phase;
  double t_prev = 0.0, F_best = -std::numeric_limits<double>::infinity(), t_best = 0.0;
  bool have_end = false;

  Observer obs;
  obs.on_step = [&](double t, const CMat& rho) {
    const double F = lateral_force(rho, ops);
    const double E = (rho.real().cwiseProduct(ops.hamiltonian(t))).sum();
    acc.add(t, F, E);
    if (t <= T + 0.5 * dt && F > F_best) {
      F_best = F;
      t_best = t;
    }
    if (!have_end && t >= T - 0.5 * dt) {
      res.P_released_end = acc.released_power();
      have_end = true;
    }
    const long k = std::lround(t / dt);
    if (cfg.geometric_phase && (k % phase_stride == 0 || k % out_stride == 0 || k == total_steps)) {
      if (!phase)
        phase.emplace(rho);
      else
        phase->update(rho, ops.drift(), t - t_prev);
      t_prev = t;
    }
  };
  obs.on_output = [&](double t, const CMat& rho, const SpectrumSnapshot& snap) {
    TrajectoryRecord r;
    r.t_bar = t;
    r.t_over_T = t / T;
    const auto ep = energy_and_populations(rho, ops.hamiltonian(t), snap, cfg.n_levels);
    r.E_avg = ep.E_avg;
    r.populations = ep.populations;
    r.S_L = linear_entropy(rho);
    const auto kin = kinematics(rho, t, ops);
    r.x_avg = kin.x_avg;
    r.x_c = p.v_bar * t;
    r.v_avg = kin.v_avg;
    r.sigma_x_sigma_p = kin.sigma_x_sigma_p;
    r.F_L_norm = normalize_force(lateral_force(rho, ops), p);
    r.W = acc.work();
    r.Q = acc.heat();
    r.P_released = acc.released_power();
    r.gamma_phase = phase ? phase->phase(ops.static_overlap(t)) : nan_v;
    res.records.push_back(std::move(r));
  };

  PropagateOptions opt;
  opt.output_stride = out_stride;
  opt.renormalize_trace = cfg.renormalize_trace;
  try {
    const auto log = propagate(mode, ops, cfg.bath, cfg.numerics, obs, opt);
    res.steps = log.steps;
    res.max_trace_dev = log.max_trace_dev;
    res.min_eig = log.min_eig;
  } catch (const NumericAbort& e) {
    res.aborted = true;
    res.message = e.what();
    res.steps = e.log().steps;
    res.max_trace_dev = e.log().max_trace_dev;
    res.min_eig = e.log().min_eig;
  }
  if (!have_end) res.P_released_end = acc.released_power();
  res.t_slip_over_T = t_best / T;
  res.F_L_max_norm = normalize_force(F_best, p);
  return res;
}

RunResult run_classical(const RunConfig& cfg) {
  const SystemParams& p = cfg.system;
  BathParams bp = cfg.bath;
  NumericsParams np = cfg.numerics;
  if (!cfg.classical_noise) {
    bp.theta = 0.0;
    np.ensemble = 1;
  }
  const long per_period = classical_steps_per_period(p, cfg.classical_dt);
  const double T = p.T_bar;

  RunResult res;
  res.dt_bar = T / per_period;
  res.steps = std::lround(np.t_max_periods * per_period);
  EnsembleResult ens;
  try {
    ens = run_ensemble(p, bp, np, cfg.classical_dt, output_stride(per_period, cfg.samples_per_period), cfg.threads);
  } catch (const NumericAbort& e) {
    res.aborted = true;
    res.message = e.what();
    return res;
  }

  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ens.t_bar.size(); ++j) {
    TrajectoryRecord r;
    const double t = ens.t_bar[j];
    r.t_bar = t;
    r.t_over_T = t / T;
    r.E_avg = ens.mean_E[j];
    r.S_L = nan_v;
    r.x_avg = ens.mean_x[j];
    r.x_c = p.v_bar * t;
    r.v_avg = ens.mean_xdot[j];
    r.sigma_x_sigma_p = nan_v;
    r.F_L_norm = normalize_force(ens.mean_F[j], p);
    r.W = ens.mean_W[j];
    r.Q = ens.mean_Q[j];
    r.P_released = t > 0 ? -ens.mean_Q[j] / t : 0.0;
    r.gamma_phase = nan_v;
    if (std::abs(t - T) < best_gap) {
      best_gap = std::abs(t - T);
      res.P_released_end = r.P_released;
    }
    res.records.push_back(std::move(r));
  }
  res.t_slip_over_T = ens.t_at_F_max / T;
  res.F_L_max_norm = normalize_force(ens.F_max, p);
  return res;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  struct Task {
    double v;
    RunMode mode;
  };
  std::vector<Task> tasks;
  for (double v : cfg.sweep.velocities)
    for (RunMode m : cfg.sweep.modes) tasks.push_back({v, m});
  std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    return a.v != b.v ? a.v < b.v : to_string(a.mode) < to_string(b.mode);
  });

  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      RunConfig c = cfg;
      c.system = make_system_params(cfg.system.u0, cfg.system.kappa, tasks[i].v);
      c.numerics.t_max_periods = cfg.sweep.periods;
      c.geometric_phase = false;
      c.threads = 1;
      const RunResult r = tasks[i].mode == RunMode::classical
                              ? run_classical(c)
                              : run_quantum(c, tasks[i].mode == RunMode::quantum_open ? QuantumMode::open
                                                                                        : QuantumMode::closed);
      SweepRow& row = rows[i];
      row.v_over_nu = tasks[i].v;
      row.mode = tasks[i].mode;
      row.aborted = r.aborted;
      row.message = r.message;
      row.P_released_end = r.aborted ? nan_v : r.P_released_end;
      row.t_slip_over_T = r.aborted ? nan_v : r.t_slip_over_T;
      row.F_L_max_norm = r.aborted ? nan_v : r.F_L_max_norm;
    }
  };
  const int nt = std::max(1, std::min<int>(cfg.threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < nt; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& rows) {
  out << trajectory_header << '\n';
  for (const auto& r : rows) {
    out << cell(r.t_bar) << ',' << cell(r.t_over_T) << ',' << cell(r.E_avg);
    for (std::size_t n = 0; n < 5; ++n) out << ',' << (n < r.populations.size() ? cell(r.populations[n]) : "");
    out << ',' << cell(r.S_L) << ',' << cell(r.x_avg) << ',' << cell(r.x_c) << ',' << cell(r.v_avg) << ','
        << cell(r.sigma_x_sigma_p) << ',' << cell(r.F_L_norm) << ',' << cell(r.W) << ',' << cell(r.Q) << ','
        << cell(r.P_released) << ',' << cell(r.gamma_phase) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << sweep_header << '\n';
  for (const auto& r : rows)
    out << cell(r.v_over_nu) << ',' << to_string(r.mode) << ',' << cell(r.P_released_end) << ','
        << cell(r.t_slip_over_T) << ',' << cell(r.F_L_max_norm) << '\n';
}

void write_spectrum_csv(std::ostream& out, const RunConfig& cfg) {
  const OperatorSet ops(cfg.system, cfg.numerics.n_size);
  out << "t_bar,t_over_T";
  for (int n = 0; n < cfg.n_levels; ++n) out << ",E" << n;
  out << '\n';
  for (double t : period_grid(cfg.system, cfg.spectrum_points)) {
    const auto snap = solve_snapshot(t, ops);
    out << cell(t) << ',' << cell(t / cfg.system.T_bar);
    for (int n = 0; n < cfg.n_levels; ++n) out << ',' << cell(snap.energies(n));
    out << '\n';
  }
}

void write_anticrossings_csv(std::ostream& out, const RunConfig& cfg) {
  const auto grid = period_grid(cfg.system, 2001);
  const auto acs = find_anticrossings(cfg.system, cfg.numerics.n_size, cfg.n_levels, grid);
  out << "n,n2,t_over_T,gap,slope,v_lz_over_nu,P_lz\n";
  for (const auto& a : acs)
    out << a.n << ',' << a.n2 << ',' << cell(a.t_star / cfg.system.T_bar) << ',' << cell(a.gap) << ','
        << cell(a.slope) << ',' << cell(a.v_lz) << ',' << cell(lz_probability(a, cfg.system.v_bar)) << '\n';
}

void write_slip_times_csv(std::ostream& out, const RunConfig& cfg) {
  const auto ts = eigenstate_slip_times(cfg.system, cfg.numerics.n_size, cfg.n_levels);
  out << "n,t_slip_over_T\n";
  for (std::size_t n = 0; n < ts.size(); ++n) out << n << ',' << (ts[n] ? cell(*ts[n]) : "") << '\n';
}

void write_bath_rates_csv(std::ostream& out, const RunConfig& cfg) {
  out << "E,gamma,sigma\n";
  const int m = cfg.rates_points;
  for (int i = 0; i < m; ++i) {
    const double E = cfg.rates_e_min + (cfg.rates_e_max - cfg.rates_e_min) * i / (m - 1);
    out << cell(E) << ',' << cell(gamma_rate(E, cfg.bath)) << ',' << cell(sigma_shift(E, cfg.bath)) << '\n';
  }
}

RunStatus run(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  RunStatus st;
  std::vector<std::pair<std::string, std::string>> extra;

  auto open_file = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    st.files.push_back(name);
    return f;
  };
  auto record_result = [&](const RunResult& r) {
    extra.emplace_back("run.dt_bar", format_number(r.dt_bar, 0));
    extra.emplace_back("run.steps", std::to_string(r.steps));
    if (cfg.mode == RunMode::quantum_closed || cfg.mode == RunMode::quantum_open) {
      extra.emplace_back("run.max_trace_dev", format_number(r.max_trace_dev, 6));
      extra.emplace_back("run.min_eig", format_number(r.min_eig, 6));
    }
    extra.emplace_back("result.t_slip_over_T", format_number(r.t_slip_over_T));
    extra.emplace_back("result.F_L_max_norm", format_number(r.F_L_max_norm));
    extra.emplace_back("result.P_released_end", format_number(r.P_released_end));
    if (r.aborted) {
      st.exit_code = 3;
      st.message = r.message;
    }
  };

  switch (cfg.mode) {
    case RunMode::quantum_closed:
    case RunMode::quantum_open: {
      const bool open = cfg.mode == RunMode::quantum_open;
      if (open) {
        const OperatorSet ops(cfg.system, cfg.numerics.n_size);
        std::vector<SpectrumSnapshot> hist;
        for (double t : period_grid(cfg.system, 2001)) {
          auto s = solve_snapshot(t, ops);
          hist.push_back(hist.empty() ? s : phase_align(hist.back(), s, false));
        }
        const auto md = markov_diagnostics(hist, ops, cfg.bath);
        extra.emplace_back("markov.tau_E", format_number(md.tau_E));
        extra.emplace_back("markov.tau_s", format_number(md.tau_s));
        extra.emplace_back("markov.tau_B", format_number(md.tau_B));
        extra.emplace_back("markov.tau_R", md.tau_R ? format_number(*md.tau_R) : "");
        extra.emplace_back("markov.valid", md.valid_bath_vs_relaxation && md.valid_bath_vs_system ? "true" : "false");
      }
      const auto r = run_quantum(cfg, open ? QuantumMode::open : QuantumMode::closed);
      auto f = open_file("trajectory.csv");
      write_trajectory_csv(f, r.records);
      record_result(r);
      break;
    }
    case RunMode::classical: {
      const auto r = run_classical(cfg);
      auto f = open_file("trajectory.csv");
      write_trajectory_csv(f, r.records);
      record_result(r);
      break;
    }
    case RunMode::sweep: {
      const auto rows = run_sweep(cfg);
      auto f = open_file("sweep_summary.csv");
      write_sweep_csv(f, rows);
      for (const auto& r : rows)
        if (r.aborted) {
          st.exit_code = 3;
          st.message = "v=" + format_number(r.v_over_nu) + " " + to_string(r.mode) + ": " + r.message;
        }
      break;
    }
    case RunMode::spectrum: {
      auto f1 = open_file("spectrum.csv");
      write_spectrum_csv(f1, cfg);
      auto f2 = open_file("anticrossings.csv");
      write_anticrossings_csv(f2, cfg);
      auto f3 = open_file("slip_times.csv");
      write_slip_times_csv(f3, cfg);
      break;
    }
    case RunMode::bath_rates: {
      auto f = open_file("bath_rates.csv");
      write_bath_rates_csv(f, cfg);
      break;
    }
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream m(dir / "manifest.txt", std::ios::binary);
  m << "run.version=" << PTFRIC_VERSION << '\n';
  m << "run.status=" << (st.exit_code == 0 ? "ok" : "partial") << '\n';
  if (!st.message.empty()) m << "run.message=" << st.message << '\n';
  m << "run.wall_time_s=" << format_number(wall, 6) << '\n';
  std::string files;
  for (const auto& f : st.files) files += (files.empty() ? "" : ",") + f;
  m << "run.files=" << files << '\n';
  for (const auto& [k, v] : extra) m << k << '=' << v << '\n';
  for (const auto& [k, v] : cfg.resolved()) m << k << '=' << v << '\n';
  st.files.push_back("manifest.txt");
  return st;
}

}  // namespace ptf
