#pragma once

#include <optional>
#include <vector>

#include "ptfric/operators.hpp"

namespace ptf {

struct SpectrumSnapshot {
  double t_bar = 0.0;
  RVec energies;  // ascending unless relabeled by phase_align
  RMat vectors;   // column n is eigenvector n in the moving basis
  int size() const { return static_cast<int>(energies.size()); }
};

SpectrumSnapshot solve_snapshot(double t_bar, const OperatorSet& ops);
SpectrumSnapshot solve_snapshot(double t_bar, const SystemParams& p, int n_size);

// Sign-aligns cur against prev and, when some column overlap drops below 0.5, relabels
// columns by greedy maximum-overlap matching. Strict mode throws if a matched overlap stays
// below 0.5; relaxed mode only flips signs in that case.
SpectrumSnapshot phase_align(const SpectrumSnapshot& prev, const SpectrumSnapshot& cur, bool strict = true);

struct AntiCrossing {
  int n = 0;
  int n2 = 1;
  double t_star = 0.0;  // time of minimum gap
  double gap = 0.0;
  double slope = 0.0;  // max |d gap / d x_c| over the flanks of the minimum
  double v_lz = 0.0;   // pi gap^2 / (2 slope)
};

// Uniform grid over one period, endpoints included.
std::vector<double> period_grid(const SystemParams& p, int points = 2001);

// Earliest pronounced gap minimum per adjacent pair (n, n+1), n + 1 < n_levels. A minimum
// counts when it dips below min_depth_ratio times the lower of its two flanking maxima.
std::vector<AntiCrossing> find_anticrossings(const SystemParams& p, int n_size, int n_levels,
                                             const std::vector<double>& t_grid, double min_depth_ratio = 0.85);

double lz_probability(double v_lz, double v);
double lz_probability(const AntiCrossing& ac, double v);

// Time (in periods) minimizing <x_n> - v t inside [0.32, 0.68] T, kept only when the
// minimizer is interior and E_n lies below the barrier between the two wells of the
// classical potential at that time.
std::vector<std::optional<double>> eigenstate_slip_times(const SystemParams& p, int n_size, int n_levels,
                                                         int samples = 1441);

// Barrier top of 1/2 (x - x_c)^2 + u0 sin^2(kappa x / 2) between its two lowest minima.
std::optional<double> classical_barrier(double x_c, const SystemParams& p);

struct ConvergencePoint {
  int n_size = 0;
  double max_abs_diff = 0.0;  // vs the largest size, over levels and times
};

std::vector<ConvergencePoint> convergence_scan(const SystemParams& p, const std::vector<int>& sizes, int n_levels,
                                               const std::vector<double>& t_grid);

}  // namespace ptf
