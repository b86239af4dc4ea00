#include "ptfric/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace ptf {

EnergyPopulations energy_and_populations(const CMat& rho, const RMat& H, const SpectrumSnapshot& snap,
                                         int n_levels) {
  EnergyPopulations out;
  out.E_avg = (rho * H.cast<std::complex<double>>()).trace().real();
  const int n = std::min(n_levels, snap.size());
  const CMat v = snap.vectors.leftCols(n).cast<std::complex<double>>();
  const CMat pv = rho * v;
  out.populations.resize(n_levels, 0.0);
  for (int k = 0; k < n; ++k) out.populations[k] = v.col(k).dot(pv.col(k)).real();
  return out;
}

double linear_entropy(const CMat& rho) {
  const double n = static_cast<double>(rho.rows());
  if (n < 2) return 0.0;
  const double purity = rho.cwiseAbs2().sum();  // Tr rho^2 for Hermitian rho
  return n / (n - 1.0) * (1.0 - purity);
}

Kinematics kinematics(const CMat& rho, double t_bar, const OperatorSet& ops) {
  const int n = ops.size();
  const auto& p = ops.params();
  // exact truncations of x^2 and p^2: (2n+1)/2 on the diagonal, +-sqrt((n+1)(n+2))/2 two off
  double x1 = 0.0, x2 = 0.0, p1 = 0.0, p2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = (2.0 * k + 1.0) / 2.0;
    x2 += d * rho(k, k).real();
    p2 += d * rho(k, k).real();
    if (k + 1 < n) {
      const double e = std::sqrt((k + 1) / 2.0);
      x1 += 2.0 * e * rho(k, k + 1).real();
      // Tr[rho P] with P_{k+1,k} = i e, P_{k,k+1} = -i e
      p1 -= 2.0 * e * rho(k, k + 1).imag();
    }
    if (k + 2 < n) {
      const double o = std::sqrt((k + 1.0) * (k + 2.0)) / 2.0;
      x2 += 2.0 * o * rho(k, k + 2).real();
      p2 -= 2.0 * o * rho(k, k + 2).real();
    }
  }
  Kinematics out;
  out.x_avg = p.v_bar * t_bar + x1;
  out.v_avg = p1;
  out.sigma_x_sigma_p = std::sqrt(std::max(0.0, x2 - x1 * x1) * std::max(0.0, p2 - p1 * p1));
  return out;
}

double lateral_force(const CMat& rho, const OperatorSet& ops) {
  double x1 = 0.0;
  for (int k = 0; k + 1 < ops.size(); ++k) x1 += 2.0 * std::sqrt((k + 1) / 2.0) * rho(k, k + 1).real();
  return -x1;
}

double normalize_force(double F, const SystemParams& p) {
  const double unit = 0.5 * p.u0 * p.kappa;
  return unit > 0 ? F / unit : std::numeric_limits<double>::quiet_NaN();
}

void WorkHeatAccumulator::add(double t_bar, double force, double energy) {
  if (!started_) {
    started_ = true;
    E0_ = energy;
  } else {
    W_ += v_ * 0.5 * (force + F_) * (t_bar - t_);
  }
  t_ = t_bar;
  F_ = force;
  E_ = energy;
}

GeometricPhase::GeometricPhase(const CMat& rho0, double weight_floor) : floor_(weight_floor) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho0);
  const int n = static_cast<int>(rho0.rows());
  std::vector<int> keep;
  for (int k = n - 1; k >= 0; --k)
    if (es.eigenvalues()(k) > floor_) keep.push_back(k);
  p0_.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    xi0_.push_back(es.eigenvalues()(keep[j]));
    p0_.col(static_cast<Eigen::Index>(j)) = es.eigenvectors().col(keep[j]);
  }
  xi_ = xi0_;
  p_ = p0_;
  beta_.assign(keep.size(), 0.0);
  sig_prev_.assign(keep.size(), std::numeric_limits<double>::quiet_NaN());
}

void GeometricPhase::update(const CMat& rho, const CMat& sigma_t, double dt) {
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  update_eigen(es.eigenvalues(), es.eigenvectors(), sigma_t, dt);
}

void GeometricPhase::update_eigen(const RVec& xi, const CMat& vecs, const CMat& sigma_t, double dt) {
  const int nc = contributors();
  const CMat ov = p_.adjoint() * vecs;
  std::vector<bool> used(vecs.cols(), false);
  for (int j = 0; j < nc; ++j) {
    Eigen::Index best = 0;
    double bm = -1.0;
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
      if (used[c]) continue;
      const double m = std::abs(ov(j, c));
      if (m > bm) {
        bm = m;
        best = c;
      }
    }
    used[best] = true;
    if (std::isnan(sig_prev_[j])) sig_prev_[j] = p_.col(j).dot(sigma_t * p_.col(j)).real();
    const CVec next = vecs.col(best);
    const double sig_next = next.dot(sigma_t * next).real();
    beta_[j] += std::arg(ov(j, best)) - 0.5 * dt * (sig_prev_[j] + sig_next);
    sig_prev_[j] = sig_next;
    p_.col(j) = next;
    xi_[j] = xi(best);
    for (Eigen::Index c = 0; c < xi.size(); ++c)
      if (c != best && std::abs(xi(c) - xi(best)) < 1e-10) degenerate_ = true;
  }
}

double GeometricPhase::phase(const RMat& c0) const {
  // <phi_k(0)|phi_k(t)> = P_k(0)^dag c0^T P_k(t)
  const CMat moved = c0.transpose().cast<std::complex<double>>() * p_;
  std::complex<double> acc(0.0, 0.0);
  for (int j = 0; j < contributors(); ++j) {
    const double w = std::sqrt(std::max(0.0, xi0_[j] * xi_[j]));
    acc += w * p0_.col(j).dot(moved.col(j)) * std::polar(1.0, -beta_[j]);
  }
  return std::arg(acc);
}

}  // namespace ptf
