#pragma once

#include <cstdint>
#include <optional>

namespace ptf {

// Chain microparameters. Lengths in units of the trap length l, energies in hbar*Omega.
struct ChainParams {
  double a = 1.0;    // lattice period
  double d = 1.0;    // particle-chain distance
  double A_s = 0.0;  // short-range magnitude
  double d_s = 1.0;  // short-range decay length
  double C_6 = 0.0;  // Hamaker constant
  void validate() const;
};

struct SystemParams {
  double u0 = 5.0;
  double kappa = 1.0;
  double v_bar = 0.005;
  double eta = 2.5;                // (u0/2) kappa^2
  double T_bar = 1256.6370614359;  // 2 pi / (kappa v_bar)
};

// Fills the derived fields and checks invariants.
SystemParams make_system_params(double u0, double kappa, double v_bar);

struct BathParams {
  double alpha = 1e-4;
  double omega_c = 50.0;
  double theta = 0.01;
  void validate() const;
};

struct NumericsParams {
  int n_size = 25;
  double dt_bar = 0.0;  // 0 selects the default step
  double t_max_periods = 3.0;
  int ensemble = 256;
  std::uint64_t seed = 0;
  void validate() const;
};

// Short-range theta-function sum plus closed-form vdW lattice sum.
double lattice_potential_exact(double x, const ChainParams& p);

struct CosineApprox {
  double U0 = 0.0;
  double Delta0 = 0.0;
  bool far_regime = true;  // false when d < 2a
  double max_deviation = 0.0;  // max |exact - cosine| over one period
  bool flagged = false;        // max_deviation > 5% of |U0|
};

// V(x) ~ Delta0 + U0/2 + (U0/2) cos(2 pi x / a).
CosineApprox lattice_potential_cosine(const ChainParams& p);

SystemParams build_system_params(const ChainParams& chain, std::optional<double> u0_override,
                                 double v_over_nu);

}  // namespace ptf
