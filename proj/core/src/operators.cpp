#include "ptfric/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "ptfric/special.hpp"

namespace ptf {

namespace {

// e^{-s^2/2} sqrt(lo!/hi!) s^d L_lo^d(s^2) with d = hi - lo, evaluated in log space.
// Both the cos/sin(kappa y) elements (s = kappa/sqrt2) and the displacement elements
// (s = v t / sqrt2) reduce to this kernel.
double displaced_kernel(int lo, int hi, double s) {
  const int d = hi - lo;
  const double lag = special::laguerre(lo, d, s * s);
  if (lag == 0.0 || (s == 0.0 && d > 0)) return 0.0;
  const double logmag = -0.5 * s * s + 0.5 * (special::log_factorial(lo) - special::log_factorial(hi)) +
                        (d > 0 ? d * std::log(std::abs(s)) : 0.0) + std::log(std::abs(lag));
  double sign = lag < 0 ? -1.0 : 1.0;
  if (s < 0 && d % 2 == 1) sign = -sign;
  return sign * std::exp(logmag);
}

}  // namespace

OperatorSet::OperatorSet(const SystemParams& p, int n_size) : p_(p), n_(n_size) {
  if (n_size < 1) throw std::invalid_argument("OperatorSet: n_size must be >= 1");
  c_rel_ = RMat::Zero(n_, n_);
  s_rel_ = RMat::Zero(n_, n_);
  const double s = p.kappa / std::sqrt(2.0);
  for (int m = 0; m < n_; ++m) {
    for (int n = m; n < n_; ++n) {
      const int d = n - m;
      const double b = displaced_kernel(m, n, s);
      if (d % 2 == 0) {
        c_rel_(m, n) = c_rel_(n, m) = ((d / 2) % 2 ? -b : b);
      } else {
        s_rel_(m, n) = s_rel_(n, m) = (((d - 1) / 2) % 2 ? -b : b);
      }
    }
  }
  x_rel_ = RMat::Zero(n_, n_);
  p_rel_ = CMat::Zero(n_, n_);
  for (int n = 0; n + 1 < n_; ++n) {
    const double e = std::sqrt((n + 1) / 2.0);
    x_rel_(n, n + 1) = x_rel_(n + 1, n) = e;
    p_rel_(n + 1, n) = {0.0, e};
    p_rel_(n, n + 1) = {0.0, -e};
  }
  drift_ = p.v_bar * p_rel_;
  diag_ = RVec::LinSpaced(n_, 0.0, n_ - 1.0).array() + 0.5 + 0.5 * p.u0;
}

RMat OperatorSet::cos_kx(double t_bar) const {
  const double c = p_.kappa * p_.v_bar * t_bar;
  return std::cos(c) * c_rel_ - std::sin(c) * s_rel_;
}

RMat OperatorSet::corrugation(double t_bar) const { return -0.5 * cos_kx(t_bar); }

RMat OperatorSet::hamiltonian(double t_bar) const {
  RMat h = (-0.5 * p_.u0) * cos_kx(t_bar);
  h.diagonal() += diag_;
  return h;
}

RMat OperatorSet::coupling(double t_bar) const {
  const double c = p_.kappa * p_.v_bar * t_bar;
  return std::sin(c) * c_rel_ + std::cos(c) * s_rel_;
}

RMat OperatorSet::static_overlap(double t_bar) const {
  // <m(0)|n(t)> = <m|D(s)|n>, D the displacement by x_c = v t, s = x_c/sqrt2
  const double s = p_.v_bar * t_bar / std::sqrt(2.0);
  RMat d(n_, n_);
  for (int m = 0; m < n_; ++m)
    for (int n = 0; n < n_; ++n)
      d(m, n) = m >= n ? displaced_kernel(n, m, s) : displaced_kernel(m, n, -s);
  return d.transpose();
}

OperatorMatrix corrugation_matrix(double t_bar, const SystemParams& p, int n_size) {
  return {OperatorSet(p, n_size).corrugation(t_bar).cast<std::complex<double>>(), t_bar, OpKind::corrugation};
}

OperatorMatrix hamiltonian_matrix(double t_bar, const SystemParams& p, int n_size) {
  return {OperatorSet(p, n_size).hamiltonian(t_bar).cast<std::complex<double>>(), t_bar, OpKind::hamiltonian};
}

OperatorMatrix drift_matrix(double v_bar, int n_size) {
  SystemParams p;
  p.v_bar = v_bar;
  return {OperatorSet(p, n_size).drift(), 0.0, OpKind::drift};
}

OperatorMatrix coupling_matrix(double t_bar, const SystemParams& p, int n_size) {
  return {OperatorSet(p, n_size).coupling(t_bar).cast<std::complex<double>>(), t_bar, OpKind::coupling};
}

std::pair<OperatorMatrix, OperatorMatrix> position_momentum_matrices(int n_size) {
  OperatorSet ops(SystemParams{}, n_size);
  return {{ops.position().cast<std::complex<double>>(), 0.0, OpKind::position},
          {ops.momentum(), 0.0, OpKind::momentum}};
}

OperatorMatrix static_overlap(double t_bar, double v_bar, int n_size) {
  SystemParams p;
  p.v_bar = v_bar;
  return {OperatorSet(p, n_size).static_overlap(t_bar).cast<std::complex<double>>(), t_bar, OpKind::overlap};
}

}  // namespace ptf
