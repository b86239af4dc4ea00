#include "ptfric/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace ptf {

namespace {

void canonical_signs(RMat& v) {
  for (int j = 0; j < v.cols(); ++j) {
    Eigen::Index i;
    v.col(j).cwiseAbs().maxCoeff(&i);
    if (v(i, j) < 0) v.col(j) = -v.col(j);
  }
}

RVec levels(double t_bar, const OperatorSet& ops, int count) {
  Eigen::SelfAdjointEigenSolver<RMat> es(ops.hamiltonian(t_bar), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed at t=" + std::to_string(t_bar));
  return es.eigenvalues().head(count);
}

template <class F>
double golden_min(F f, double a, double b, int iters = 60) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

SpectrumSnapshot solve_snapshot(double t_bar, const OperatorSet& ops) {
  Eigen::SelfAdjointEigenSolver<RMat> es(ops.hamiltonian(t_bar));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed at t=" + std::to_string(t_bar));
  SpectrumSnapshot s{t_bar, es.eigenvalues(), es.eigenvectors()};
  canonical_signs(s.vectors);
  return s;
}

SpectrumSnapshot solve_snapshot(double t_bar, const SystemParams& p, int n_size) {
  if (n_size < 5) throw std::invalid_argument("solve_snapshot: n_size must be >= 5");
  return solve_snapshot(t_bar, OperatorSet(p, n_size));
}

SpectrumSnapshot phase_align(const SpectrumSnapshot& prev, const SpectrumSnapshot& cur, bool strict) {
  if (prev.size() != cur.size()) throw std::invalid_argument("phase_align: size mismatch");
  const int n = cur.size();
  const RMat ov = prev.vectors.transpose() * cur.vectors;
  std::vector<int> match(n);
  bool diagonal_ok = true;
  for (int i = 0; i < n; ++i) {
    match[i] = i;
    if (std::abs(ov(i, i)) < 0.5) diagonal_ok = false;
  }
  if (!diagonal_ok) {
    std::vector<std::tuple<double, int, int>> cand;
    cand.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cand.emplace_back(-std::abs(ov(i, j)), i, j);
    std::sort(cand.begin(), cand.end());
    std::vector<bool> used_i(n, false), used_j(n, false);
    for (auto [neg, i, j] : cand) {
      if (used_i[i] || used_j[j]) continue;
      used_i[i] = used_j[j] = true;
      match[i] = j;
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(ov(i, match[i])) < 0.5) {
        if (strict)
          throw std::runtime_error("phase_align: ambiguous overlap " + std::to_string(std::abs(ov(i, match[i]))) +
                                   " at t=" + std::to_string(cur.t_bar) + " (time step too large)");
        for (int k = 0; k < n; ++k) match[k] = k;
        break;
      }
    }
  }
  SpectrumSnapshot out{cur.t_bar, RVec(n), RMat(n, n)};
  for (int i = 0; i < n; ++i) {
    const int j = match[i];
    out.energies(i) = cur.energies(j);
    out.vectors.col(i) = ov(i, j) < 0 ? RVec(-cur.vectors.col(j)) : RVec(cur.vectors.col(j));
  }
  return out;
}

std::vector<double> period_grid(const SystemParams& p, int points) {
  if (points < 3) throw std::invalid_argument("period_grid: need at least 3 points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = p.T_bar * i / (points - 1.0);
  return g;
}

std::vector<AntiCrossing> find_anticrossings(const SystemParams& p, int n_size, int n_levels,
                                             const std::vector<double>& t_grid, double min_depth_ratio) {
  if (t_grid.size() < 3) throw std::invalid_argument("find_anticrossings: grid too small");
  const OperatorSet ops(p, n_size);
  const int ng = static_cast<int>(t_grid.size());
  RMat e(ng, n_levels);
  for (int i = 0; i < ng; ++i) e.row(i) = levels(t_grid[i], ops, n_levels).transpose();

  std::vector<AntiCrossing> out;
  for (int n = 0; n + 1 < n_levels; ++n) {
    const RVec g = e.col(n + 1) - e.col(n);
    for (int i = 1; i + 1 < ng; ++i) {
      if (!(g(i) < g(i - 1) && g(i) <= g(i + 1))) continue;
      int l = i, r = i;
      while (l > 0 && g(l - 1) >= g(l)) --l;
      while (r + 1 < ng && g(r + 1) >= g(r)) ++r;
      if (!(g(i) < min_depth_ratio * std::min(g(l), g(r)))) continue;

      auto gap_at = [&](double t) {
        const RVec ev = levels(t, ops, n + 2);
        return ev(n + 1) - ev(n);
      };
      AntiCrossing ac;
      ac.n = n;
      ac.n2 = n + 1;
      ac.t_star = golden_min(gap_at, t_grid[i - 1], t_grid[i + 1]);
      ac.gap = gap_at(ac.t_star);
      // steepest gap change between the two flanking maxima, per unit trap displacement
      const int m = 8000;
      const double ta = t_grid[l], tb = t_grid[r], h = (tb - ta) / m;
      std::vector<double> gd(m + 1);
      for (int k = 0; k <= m; ++k) gd[k] = gap_at(ta + k * h);
      double smax = 0.0;
      for (int k = 1; k < m; ++k) smax = std::max(smax, std::abs(gd[k + 1] - gd[k - 1]) / (2.0 * h * p.v_bar));
      ac.slope = smax;
      ac.v_lz = std::numbers::pi * ac.gap * ac.gap / (2.0 * ac.slope);
      out.push_back(ac);
      break;
    }
  }
  return out;
}

double lz_probability(double v_lz, double v) {
  if (!(v > 0)) throw std::invalid_argument("lz_probability: velocity must be > 0");
  return std::exp(-v_lz / v);
}

double lz_probability(const AntiCrossing& ac, double v) { return lz_probability(ac.v_lz, v); }

std::optional<double> classical_barrier(double x_c, const SystemParams& p) {
  const double k = p.kappa, u0 = p.u0;
  auto V = [&](double x) { return 0.5 * (x - x_c) * (x - x_c) + u0 * std::pow(std::sin(0.5 * k * x), 2); };
  auto dV = [&](double x) { return (x - x_c) + 0.5 * u0 * k * std::sin(k * x); };
  // every stationary point satisfies |x - x_c| <= u0 kappa / 2
  const double reach = 0.5 * u0 * k + 1.0;
  const int m = 20000;
  const double lo = x_c - reach, h = 2.0 * reach / m;
  std::vector<std::pair<double, bool>> stat;  // (x, is_min)
  double f0 = dV(lo);
  for (int i = 1; i <= m; ++i) {
    const double x1 = lo + i * h;
    const double f1 = dV(x1);
    if ((f0 < 0) != (f1 < 0)) {
      double a = x1 - h, b = x1, fa = f0;
      for (int it = 0; it < 60; ++it) {
        const double c = 0.5 * (a + b);
        const double fc = dV(c);
        if ((fa < 0) == (fc < 0)) {
          a = c;
          fa = fc;
        } else {
          b = c;
        }
      }
      stat.emplace_back(0.5 * (a + b), f0 < 0);
    }
    f0 = f1;
  }
  std::vector<double> mins;
  for (auto& [x, is_min] : stat)
    if (is_min) mins.push_back(x);
  if (mins.size() < 2) return std::nullopt;
  std::sort(mins.begin(), mins.end(), [&](double a, double b) { return V(a) < V(b); });
  const double xa = std::min(mins[0], mins[1]), xb = std::max(mins[0], mins[1]);
  double top = -1e300;
  for (auto& [x, is_min] : stat)
    if (!is_min && x > xa && x < xb) top = std::max(top, V(x));
  if (top == -1e300) return std::nullopt;
  return top;
}

std::vector<std::optional<double>> eigenstate_slip_times(const SystemParams& p, int n_size, int n_levels,
                                                         int samples) {
  const OperatorSet ops(p, n_size);
  const double w0 = 0.32, w1 = 0.68;
  auto rel = [&](double frac, int n) {
    const auto s = solve_snapshot(frac * p.T_bar, ops);
    return s.vectors.col(n).dot(ops.position() * s.vectors.col(n));
  };
  RMat table(samples, n_levels);
  std::vector<double> fr(samples);
  for (int i = 0; i < samples; ++i) {
    fr[i] = w0 + (w1 - w0) * i / (samples - 1.0);
    const auto s = solve_snapshot(fr[i] * p.T_bar, ops);
    const RMat xv = ops.position() * s.vectors.leftCols(n_levels);
    for (int n = 0; n < n_levels; ++n) table(i, n) = s.vectors.col(n).dot(xv.col(n));
  }
  std::vector<std::optional<double>> out(n_levels);
  for (int n = 0; n < n_levels; ++n) {
    Eigen::Index imin;
    table.col(n).minCoeff(&imin);
    if (imin == 0 || imin == samples - 1) continue;
    const double f = golden_min([&](double x) { return rel(x, n); }, fr[imin - 1], fr[imin + 1], 40);
    const auto s = solve_snapshot(f * p.T_bar, ops);
    const auto barrier = classical_barrier(p.v_bar * f * p.T_bar, p);
    if (barrier && s.energies(n) < *barrier) out[n] = f;
  }
  return out;
}

std::vector<ConvergencePoint> convergence_scan(const SystemParams& p, const std::vector<int>& sizes, int n_levels,
                                               const std::vector<double>& t_grid) {
  if (sizes.empty()) return {};
  const int ref = *std::max_element(sizes.begin(), sizes.end());
  const OperatorSet big(p, ref);
  std::vector<RVec> e_ref;
  for (double t : t_grid) e_ref.push_back(levels(t, big, n_levels));
  std::vector<ConvergencePoint> out;
  for (int n : sizes) {
    const OperatorSet ops(p, n);
    ConvergencePoint c{n, 0.0};
    for (std::size_t k = 0; k < t_grid.size(); ++k)
      c.max_abs_diff = std::max(c.max_abs_diff, (levels(t_grid[k], ops, n_levels) - e_ref[k]).cwiseAbs().maxCoeff());
    out.push_back(c);
  }
  return out;
}

}  // namespace ptf
