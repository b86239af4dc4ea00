#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ptfric/params.hpp"

namespace ptf {

struct ClassicalState {
  double x_bar = 0.0;
  double xdot_bar = 0.0;
  double t_bar = 0.0;
};

struct ClassicalSample {
  double t_bar = 0.0;
  double x_bar = 0.0;
  double xdot_bar = 0.0;
  double F_L = 0.0;  // -(x - v t)
  double E = 0.0;    // xdot^2/2 + (x - v t)^2/2 + u0 sin^2(kappa x / 2)
  double W = 0.0;
  double Q = 0.0;
};

struct ClassicalRun {
  std::vector<ClassicalSample> samples;  // at the output stride, t = 0 included
  double F_max = 0.0;                    // signed maximum of F_L over the first period
  double t_at_F_max = 0.0;
};

// -(x - v t) - (u0 kappa / 2) sin(kappa x)
double deterministic_force(double x_bar, double t_bar, const SystemParams& p);

// c(x) = 2 pi alpha kappa^2 cos^2(kappa x)
double damping_coefficient(double x_bar, const SystemParams& p, const BathParams& bp);

double viscous_force(double x_bar, double xdot_bar, const SystemParams& p, const BathParams& bp);

// Gaussian momentum impulse over one step, variance 2 theta c(x) dt.
double sample_random_force(double x_bar, double dt_bar, double theta, const SystemParams& p, const BathParams& bp,
                           std::mt19937_64& rng);

double classical_energy(double x_bar, double xdot_bar, double t_bar, const SystemParams& p);

// Step satisfying sqrt(1 + u0 kappa^2 / 2) dt <= 0.02 and at least 20000 steps per period.
double default_classical_step(const SystemParams& p);

// Independent stream for trajectory `index` under `seed`.
std::mt19937_64 trajectory_stream(std::uint64_t seed, std::uint64_t index);

// RK4 on the drift plus one noise impulse per step (multiplicative factor taken at the step start).
ClassicalRun integrate_trajectory(const ClassicalState& init, const SystemParams& p, const BathParams& bp,
                                  double dt_bar, long steps, long stride, std::mt19937_64& rng);

// ceil(T / dt) for an explicit step, otherwise the default step rounded up to a multiple of 1000.
long classical_steps_per_period(const SystemParams& p, double dt_bar = 0.0);

struct EnsembleResult {
  std::vector<double> t_bar;
  std::vector<double> mean_x, var_x, mean_xdot, var_xdot, mean_F, var_F, mean_E, var_E, mean_W, mean_Q, var_Q;
  int trajectories = 0;
  std::uint64_t seed = 0;  // stream k uses trajectory_stream(seed, k)
  double F_max = 0.0;      // signed maximum of the mean force in the first period
  double t_at_F_max = 0.0;
};

// np.ensemble trajectories from rest at x = 0; stride 0 selects T/1000.
EnsembleResult run_ensemble(const SystemParams& p, const BathParams& bp, const NumericsParams& np,
                            double dt_bar = 0.0, long stride = 0, int threads = 1);

}  // namespace ptf
