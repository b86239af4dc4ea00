#include "ptfric/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ptf {

namespace {
constexpr double pi = std::numbers::pi;

double sr_prefactor(const ChainParams& p) {
  return p.A_s * std::sqrt(2.0 * pi * p.d * p.d_s / (p.a * p.a)) * std::exp(-p.d / p.d_s);
}

// 1 + 2 sum q^{n^2} cos(2 n u)
double theta3(double u, double q) {
  double s = 1.0;
  for (int n = 1; n < 1000000; ++n) {
    const double qn = std::pow(q, static_cast<double>(n) * n);
    if (qn < 1e-16) break;
    s += 2.0 * qn * std::cos(2.0 * n * u);
  }
  return s;
}

// sum_n 1/[1 + (a/d)^2 (x/a - n)^2]^3 in closed form, written with 1/cosh to stay finite.
double vdw_lattice_sum(double x, const ChainParams& p) {
  const double k = 2.0 * pi * p.d / p.a;
  const double c = std::cos(2.0 * pi * x / p.a);
  const double e = std::exp(-k);
  const double sech = 2.0 * e / (1.0 + e * e);
  const double th = (1.0 - e * e) / (1.0 + e * e);
  const double den = 1.0 - c * sech;  // (cosh - cos)/cosh
  const double r = p.d / p.a;
  const double t1 = 3.0 * pi * r / 8.0 * th / den;
  const double t2 = 3.0 * pi * pi * r * r / 4.0 * (c - sech) * sech / (den * den);
  const double t3 = pi * pi * pi * r * r * r / 2.0 * th * (c + (c * c - 2.0) * sech) * sech / (den * den * den);
  return t1 + t2 + t3;
}
}  // namespace

void ChainParams::validate() const {
  if (!(a > 0)) throw std::invalid_argument("chain.a must be > 0");
  if (!(d > 0)) throw std::invalid_argument("chain.d must be > 0");
  if (!(d_s > 0)) throw std::invalid_argument("chain.d_s must be > 0");
  if (!(A_s >= 0)) throw std::invalid_argument("chain.A_s must be >= 0");
  if (!(C_6 >= 0)) throw std::invalid_argument("chain.C_6 must be >= 0");
}

void BathParams::validate() const {
  if (!(alpha >= 0)) throw std::invalid_argument("bath.alpha must be >= 0");
  if (!(omega_c > 0)) throw std::invalid_argument("bath.omega_c must be > 0");
  if (!(theta >= 0)) throw std::invalid_argument("bath.theta must be >= 0");
}

void NumericsParams::validate() const {
  if (n_size < 5) throw std::invalid_argument("numerics.n_size must be >= 5");
  if (!(dt_bar >= 0)) throw std::invalid_argument("numerics.dt must be > 0 (or 0 for the default)");
  if (!(t_max_periods > 0)) throw std::invalid_argument("numerics.periods must be > 0");
  if (ensemble < 1) throw std::invalid_argument("numerics.ensemble must be >= 1");
}

SystemParams make_system_params(double u0, double kappa, double v_bar) {
  if (!(u0 >= 0)) throw std::invalid_argument("system.u0 must be >= 0");
  if (!(kappa > 0)) throw std::invalid_argument("system.kappa must be > 0");
  if (!(v_bar > 0)) throw std::invalid_argument("drive.v must be > 0");
  SystemParams s;
  s.u0 = u0;
  s.kappa = kappa;
  s.v_bar = v_bar;
  s.eta = 0.5 * u0 * kappa * kappa;
  s.T_bar = 2.0 * pi / (kappa * v_bar);
  return s;
}

double lattice_potential_exact(double x, const ChainParams& p) {
  p.validate();
  double v = 0.0;
  if (p.A_s > 0) {
    const double q = std::exp(-2.0 * pi * pi * p.d * p.d_s / (p.a * p.a));
    v += sr_prefactor(p) * theta3(pi * x / p.a, q);
  }
  if (p.C_6 > 0) v -= p.C_6 / std::pow(p.d, 6) * vdw_lattice_sum(x, p);
  return v;
}

CosineApprox lattice_potential_cosine(const ChainParams& p) {
  p.validate();
  const double sr = sr_prefactor(p);
  const double lr = 3.0 * pi * p.C_6 / (8.0 * std::pow(p.d, 5) * p.a);
  const double harmonic = sr * std::exp(-2.0 * pi * pi * p.d * p.d_s / (p.a * p.a)) -
                          lr * std::exp(-2.0 * pi * p.d / p.a);
  CosineApprox out;
  out.U0 = 4.0 * harmonic;
  out.Delta0 = (sr - lr) - 0.5 * out.U0;
  out.far_regime = p.d >= 2.0 * p.a;
  const int n = 256;
  for (int i = 0; i < n; ++i) {
    const double x = p.a * i / n;
    const double approx = out.Delta0 + 0.5 * out.U0 + 0.5 * out.U0 * std::cos(2.0 * pi * x / p.a);
    out.max_deviation = std::max(out.max_deviation, std::abs(lattice_potential_exact(x, p) - approx));
  }
  out.flagged = out.max_deviation > 0.05 * std::abs(out.U0);
  return out;
}

SystemParams build_system_params(const ChainParams& chain, std::optional<double> u0_override,
                                 double v_over_nu) {
  if (!(v_over_nu > 0)) throw std::invalid_argument("velocity v/nu must be > 0");
  chain.validate();
  const double u0 = u0_override ? *u0_override : lattice_potential_cosine(chain).U0;
  return make_system_params(u0, 2.0 * pi / chain.a, v_over_nu);
}

}  // namespace ptf
