#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ptfric/operators.hpp"
#include "ptfric/params.hpp"

namespace ptf {

struct SpectrumSnapshot;

inline constexpr double epsilon_deg = 1e-9;

// J(w) = 2 alpha w e^{-|w|/omega_c}
double spectral_density(double omega, const BathParams& bp);

// u_rn = int_0^inf J(w)/w dw = 2 alpha omega_c
double renormalization_constant(const BathParams& bp);

// C(tau) = int e^{i w tau} f_BE(w) J(w) dw, closed form through trigamma. Needs theta > 0.
std::complex<double> bath_correlation(double tau, const BathParams& bp);

// gamma(E) = 4 pi alpha E e^{-|E|/omega_c} / (1 - e^{-E/theta})
double gamma_rate(double E, const BathParams& bp);

// sigma(E) = PV int J(w) f_BE(w) / (E + w) dw via the exponential-integral series.
double sigma_shift(double E, const BathParams& bp);

// Gamma(E) = gamma(E)/2 + i sigma(E)
std::complex<double> transition_rate(double E, const BathParams& bp);

// Gamma(E) with sigma tabulated on a uniform grid over [-e_max, e_max] (cubic interpolation),
// falling back to direct evaluation outside the grid.
class BathRates {
 public:
  BathRates(const BathParams& bp, double e_max, double step = 1e-3);

  const BathParams& params() const { return bp_; }
  double gamma(double E) const { return gamma_rate(E, bp_); }
  double sigma(double E) const;
  std::complex<double> operator()(double E) const { return {0.5 * gamma(E), sigma(E)}; }

 private:
  BathParams bp_;
  double e_max_ = 0.0, h_ = 1e-3;
  std::vector<double> table_;
};

struct MarkovDiagnostics {
  double tau_E = 0.0;
  double tau_s = 0.0;
  double tau_B = 0.0;
  std::optional<double> tau_R;  // absent when alpha = 0
  bool valid_bath_vs_relaxation = true;
  bool valid_bath_vs_system = true;
};

// Born-Markov time scales from a phase-aligned, uniformly spaced snapshot history.
MarkovDiagnostics markov_diagnostics(const std::vector<SpectrumSnapshot>& history, const OperatorSet& ops,
                                     const BathParams& bp);

}  // namespace ptf
