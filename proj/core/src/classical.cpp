#include "ptfric/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <exception>
#include <thread>

#include "ptfric/propagator.hpp"

namespace ptf {

double deterministic_force(double x_bar, double t_bar, const SystemParams& p) {
  return -(x_bar - p.v_bar * t_bar) - 0.5 * p.u0 * p.kappa * std::sin(p.kappa * x_bar);
}

double damping_coefficient(double x_bar, const SystemParams& p, const BathParams& bp) {
  const double c = std::cos(p.kappa * x_bar);
  return 2.0 * std::numbers::pi * bp.alpha * p.kappa * p.kappa * c * c;
}

double viscous_force(double x_bar, double xdot_bar, const SystemParams& p, const BathParams& bp) {
  return -damping_coefficient(x_bar, p, bp) * xdot_bar;
}

double sample_random_force(double x_bar, double dt_bar, double theta, const SystemParams& p, const BathParams& bp,
                           std::mt19937_64& rng) {
  if (theta <= 0.0 || bp.alpha <= 0.0) return 0.0;
  std::normal_distribution<double> n01(0.0, 1.0);
  return std::sqrt(2.0 * theta * damping_coefficient(x_bar, p, bp) * dt_bar) * n01(rng);
}

double classical_energy(double x_bar, double xdot_bar, double t_bar, const SystemParams& p) {
  const double r = x_bar - p.v_bar * t_bar;
  const double s = std::sin(0.5 * p.kappa * x_bar);
  return 0.5 * xdot_bar * xdot_bar + 0.5 * r * r + p.u0 * s * s;
}

double default_classical_step(const SystemParams& p) {
  return std::min(0.02 / std::sqrt(1.0 + 0.5 * p.u0 * p.kappa * p.kappa), p.T_bar / 20000.0);
}

std::mt19937_64 trajectory_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

ClassicalRun integrate_trajectory(const ClassicalState& init, const SystemParams& p, const BathParams& bp,
                                  double dt, long steps, long stride, std::mt19937_64& rng) {
  if (!(dt > 0)) throw std::invalid_argument("integrate_trajectory: dt must be > 0");
  if (stride < 1) stride = 1;
  auto acc = [&](double x, double v, double t) { return deterministic_force(x, t, p) + viscous_force(x, v, p, bp); };
  ClassicalRun run;
  double x = init.x_bar, v = init.xdot_bar, t = init.t_bar;
  const double E0 = classical_energy(x, v, t, p);
  double W = 0.0;
  double F = -(x - p.v_bar * t);
  run.F_max = F;
  run.t_at_F_max = t;
  run.samples.push_back({t, x, v, F, E0, 0.0, 0.0});
  for (long k = 0; k < steps; ++k) {
    const double h = dt, hh = 0.5 * dt;
    const double k1x = v, k1v = acc(x, v, t);
    const double k2x = v + hh * k1v, k2v = acc(x + hh * k1x, v + hh * k1v, t + hh);
    const double k3x = v + hh * k2v, k3v = acc(x + hh * k2x, v + hh * k2v, t + hh);
    const double k4x = v + h * k3v, k4v = acc(x + h * k3x, v + h * k3v, t + h);
    const double noise = sample_random_force(x, dt, bp.theta, p, bp, rng);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) + noise;
    t = init.t_bar + (k + 1) * dt;
    if (!std::isfinite(x) || std::abs(x) > 1e6) {
      PropagationLog log;
      log.steps = k + 1;
      throw NumericAbort("classical trajectory diverged at t=" + std::to_string(t), log);
    }
    const double Fn = -(x - p.v_bar * t);
    W += p.v_bar * 0.5 * (F + Fn) * dt;
    F = Fn;
    if (t - init.t_bar <= p.T_bar && F > run.F_max) {
      run.F_max = F;
      run.t_at_F_max = t;
    }
    if ((k + 1) % stride == 0 || k + 1 == steps) {
      const double E = classical_energy(x, v, t, p);
      run.samples.push_back({t, x, v, F, E, W, E - E0 - W});
    }
  }
  return run;
}

long classical_steps_per_period(const SystemParams& p, double dt_bar) {
  const double target = dt_bar > 0 ? dt_bar : default_classical_step(p);
  const long n = std::max(1L, static_cast<long>(std::ceil(p.T_bar / target)));
  return dt_bar > 0 ? n : ((n + 999) / 1000) * 1000;
}

EnsembleResult run_ensemble(const SystemParams& p, const BathParams& bp, const NumericsParams& np, double dt_bar,
                            long stride, int threads) {
  np.validate();
  const long per_period = classical_steps_per_period(p, dt_bar);
  const double dt = p.T_bar / per_period;
  if (stride <= 0) stride = std::max(1L, per_period / 1000);
  const long steps = std::lround(np.t_max_periods * per_period);
  const int n = np.ensemble;

  std::vector<ClassicalRun> runs(n);
  const int nt = std::max(1, std::min(threads, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nt);
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += nt) {
          auto rng = trajectory_stream(np.seed, static_cast<std::uint64_t>(i));
          runs[i] = integrate_trajectory(ClassicalState{}, p, bp, dt, steps, stride, rng);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  EnsembleResult r;
  r.trajectories = n;
  r.seed = np.seed;
  const std::size_t m = runs[0].samples.size();
  auto resize = [m](std::vector<double>& v) { v.assign(m, 0.0); };
  for (auto* v : {&r.t_bar, &r.mean_x, &r.var_x, &r.mean_xdot, &r.var_xdot, &r.mean_F, &r.var_F, &r.mean_E, &r.var_E,
                  &r.mean_W, &r.mean_Q, &r.var_Q})
    resize(*v);
  // fixed summation order keeps results independent of the thread count
  for (std::size_t j = 0; j < m; ++j) {
    r.t_bar[j] = runs[0].samples[j].t_bar;
    for (int i = 0; i < n; ++i) {
      const auto& s = runs[i].samples[j];
      r.mean_x[j] += s.x_bar;
      r.mean_xdot[j] += s.xdot_bar;
      r.mean_F[j] += s.F_L;
      r.mean_E[j] += s.E;
      r.mean_W[j] += s.W;
      r.mean_Q[j] += s.Q;
    }
    r.mean_x[j] /= n;
    r.mean_xdot[j] /= n;
    r.mean_F[j] /= n;
    r.mean_E[j] /= n;
    r.mean_W[j] /= n;
    r.mean_Q[j] /= n;
    if (n > 1) {
      for (int i = 0; i < n; ++i) {
        const auto& s = runs[i].samples[j];
        r.var_x[j] += std::pow(s.x_bar - r.mean_x[j], 2);
        r.var_xdot[j] += std::pow(s.xdot_bar - r.mean_xdot[j], 2);
        r.var_F[j] += std::pow(s.F_L - r.mean_F[j], 2);
        r.var_E[j] += std::pow(s.E - r.mean_E[j], 2);
        r.var_Q[j] += std::pow(s.Q - r.mean_Q[j], 2);
      }
      for (auto* v : {&r.var_x, &r.var_xdot, &r.var_F, &r.var_E, &r.var_Q}) (*v)[j] /= (n - 1);
    }
  }
  if (n == 1) {
    r.F_max = runs[0].F_max;
    r.t_at_F_max = runs[0].t_at_F_max;
  } else {
    r.F_max = r.mean_F[0];
    r.t_at_F_max = r.t_bar[0];
    for (std::size_t j = 0; j < m; ++j)
      if (r.t_bar[j] <= p.T_bar && r.mean_F[j] > r.F_max) {
        r.F_max = r.mean_F[j];
        r.t_at_F_max = r.t_bar[j];
      }
  }
  return r;
}

}  // namespace ptf
