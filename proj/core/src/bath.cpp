#include "ptfric/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ptfric/special.hpp"
#include "ptfric/spectrum.hpp"

namespace ptf {

namespace {
constexpr double pi = std::numbers::pi;

// p(a) = e^{-a}Ei(a); e^{a}Ei(-a) = p(-a)
double pe(double a) { return special::scaled_ei(a); }
double g_sum(double a) { return pe(a) + pe(-a); }  // G' = g
double g_anti(double a) { return pe(-a) - pe(a); }
}  // namespace

double spectral_density(double omega, const BathParams& bp) {
  return 2.0 * bp.alpha * omega * std::exp(-std::abs(omega) / bp.omega_c);
}

double renormalization_constant(const BathParams& bp) { return 2.0 * bp.alpha * bp.omega_c; }

std::complex<double> bath_correlation(double tau, const BathParams& bp) {
  if (!(bp.theta > 0)) throw std::invalid_argument("bath_correlation: theta must be > 0");
  const std::complex<double> z(bp.theta / bp.omega_c, -bp.theta * tau);
  return 2.0 * bp.alpha * bp.theta * bp.theta *
         (special::trigamma(1.0 + z) + special::trigamma(std::conj(z)));
}

double gamma_rate(double E, const BathParams& bp) {
  if (bp.alpha == 0.0) return 0.0;
  if (std::abs(E) < epsilon_deg) return 4.0 * pi * bp.alpha * bp.theta;
  const double ae = std::abs(E);
  const double up = 4.0 * pi * bp.alpha * ae * std::exp(-ae / bp.omega_c);
  if (bp.theta == 0.0) return E > 0 ? up : 0.0;
  const double x = ae / bp.theta;
  const double occ = -std::expm1(-x);  // 1 - e^{-|E|/theta}
  // emission and absorption written so that neither overflows
  return E > 0 ? up / occ : up * std::exp(-x) / occ;
}

double sigma_shift(double E, const BathParams& bp) {
  if (bp.alpha == 0.0) return 0.0;
  if (std::abs(E) < epsilon_deg) return -2.0 * bp.alpha * bp.omega_c;
  const double b = E / bp.omega_c;
  double s = pe(b);
  if (bp.theta > 0.0) {
    // s = p(b) + sum_{n>=1} g(b + n c); N terms explicitly, the rest by Euler-Maclaurin
    // using the closed antiderivative G of g.
    const double c = E / bp.theta;
    constexpr int N = 20;
    for (int n = 1; n < N; ++n) s += g_sum(b + n * c);
    const double A = b + N * c;
    const double G = g_anti(A);
    const double tail = -G / c + 0.5 * g_sum(A) - c * (G + 2.0 / A) / 12.0 +
                        c * c * c * (G + 2.0 / A + 4.0 / (A * A * A)) / 720.0;
    s += tail;
    if (!std::isfinite(s)) throw std::runtime_error("sigma_shift: series did not converge");
  }
  return 2.0 * bp.alpha * (-bp.omega_c + E * s);
}

std::complex<double> transition_rate(double E, const BathParams& bp) {
  return {0.5 * gamma_rate(E, bp), sigma_shift(E, bp)};
}

BathRates::BathRates(const BathParams& bp, double e_max, double step) : bp_(bp), e_max_(e_max), h_(step) {
  if (!(step > 0)) throw std::invalid_argument("BathRates: step must be > 0");
  if (bp.alpha == 0.0 || !(e_max > 0)) {
    e_max_ = 0.0;
    return;
  }
  const long n = static_cast<long>(std::ceil(e_max / h_)) + 2;
  e_max_ = (n - 2) * h_;
  table_.resize(2 * n + 1);
  for (long i = -n; i <= n; ++i) table_[i + n] = sigma_shift(i * h_, bp_);
}

double BathRates::sigma(double E) const {
  if (table_.empty() || std::abs(E) >= e_max_) return sigma_shift(E, bp_);
  const long n = (static_cast<long>(table_.size()) - 1) / 2;
  const double u = E / h_;
  const long i = static_cast<long>(std::floor(u));
  const double f = u - i;
  const double* y = &table_[i + n - 1];
  // Catmull-Rom on y[0..3] spanning [i-1, i+2]
  return y[1] + 0.5 * f * (y[2] - y[0] + f * (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3] +
                                            f * (3.0 * (y[1] - y[2]) + y[3] - y[0])));
}

MarkovDiagnostics markov_diagnostics(const std::vector<SpectrumSnapshot>& history, const OperatorSet& ops,
                                     const BathParams& bp) {
  if (history.size() < 2) throw std::invalid_argument("markov_diagnostics: need at least two snapshots");
  MarkovDiagnostics out;
  double inv_e = 0.0, inv_s = 0.0, gmax = 0.0;
  const CMat& sig = ops.drift();
  for (std::size_t k = 0; k + 1 < history.size(); ++k) {
    const auto& a = history[k];
    const auto& b = history[k + 1];
    const double dt = b.t_bar - a.t_bar;
    const int n = static_cast<int>(a.energies.size());
    for (int i = 0; i < n; ++i) {
      const double em = 0.5 * (a.energies(i) + b.energies(i));
      if (std::abs(em) > 0) inv_e = std::max(inv_e, std::abs((b.energies(i) - a.energies(i)) / dt / em));
    }
    // <m|d/dt|n> = c_m^T dc_n/dt - i c_m^T sigma_t c_n
    const RMat mid = 0.5 * (a.vectors + b.vectors);
    const RMat dc = (b.vectors - a.vectors) / dt;
    const CMat conn = (mid.transpose() * dc).cast<std::complex<double>>() -
                      std::complex<double>(0, 1) * (mid.transpose().cast<std::complex<double>>() * sig * mid);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) inv_s = std::max(inv_s, std::abs(conn(i, j)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gmax = std::max(gmax, gamma_rate(a.energies(j) - a.energies(i), bp));
  }
  const double inf = std::numeric_limits<double>::infinity();
  out.tau_E = inv_e > 0 ? 1.0 / inv_e : inf;
  out.tau_s = inv_s > 0 ? 1.0 / inv_s : inf;
  if (gmax > 0) out.tau_R = 1.0 / gmax;

  // tau_B: first tau with |C(tau)| <= |C(0)|/e
  auto corr = [&](double tau) {
    if (bp.theta > 0) return std::abs(bath_correlation(tau, bp));
    return std::abs(2.0 * bp.alpha / std::pow(std::complex<double>(1.0 / bp.omega_c, tau), 2));
  };
  const double target = corr(0.0) / std::exp(1.0);
  double lo = 0.0, hi = 1.0 / bp.omega_c;
  while (corr(hi) > target && hi < 1e12) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (corr(mid) > target ? lo : hi) = mid;
  }
  out.tau_B = hi;
  const double tau_S = std::min(out.tau_E, out.tau_s);
  out.valid_bath_vs_relaxation = !out.tau_R || out.tau_B / *out.tau_R < 0.1;
  out.valid_bath_vs_system = out.tau_B / tau_S < 0.1;
  return out;
}

}  // namespace ptf
