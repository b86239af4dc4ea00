#pragma once

#include <vector>

#include "ptfric/operators.hpp"
#include "ptfric/spectrum.hpp"

namespace ptf {

struct TrajectoryRecord {
  double t_bar = 0.0;
  double t_over_T = 0.0;
  double E_avg = 0.0;
  std::vector<double> populations;  // P_0 .. P_{n_levels-1}
  double S_L = 0.0;
  double x_avg = 0.0;
  double x_c = 0.0;
  double v_avg = 0.0;
  double sigma_x_sigma_p = 0.0;
  double F_L_norm = 0.0;
  double W = 0.0;
  double Q = 0.0;
  double P_released = 0.0;
  double gamma_phase = 0.0;
};

struct EnergyPopulations {
  double E_avg = 0.0;
  std::vector<double> populations;
};

EnergyPopulations energy_and_populations(const CMat& rho, const RMat& H, const SpectrumSnapshot& snap,
                                         int n_levels);

// (N/(N-1)) (1 - Tr rho^2)
double linear_entropy(const CMat& rho);

struct Kinematics {
  double x_avg = 0.0;
  double v_avg = 0.0;
  double sigma_x_sigma_p = 0.0;
};

Kinematics kinematics(const CMat& rho, double t_bar, const OperatorSet& ops);

// -(<x> - v t) = -Tr[rho x_rel]
double lateral_force(const CMat& rho, const OperatorSet& ops);

// force in units of pi U0 / a = u0 kappa / 2 (NaN when u0 = 0)
double normalize_force(double F, const SystemParams& p);

// Sequential fold of W = int v F dt (trapezoid), Q = E - E0 - W and P = Q / t.
class WorkHeatAccumulator {
 public:
  explicit WorkHeatAccumulator(double v_bar) : v_(v_bar) {}
  void add(double t_bar, double force, double energy);
  double work() const { return W_; }
  double heat() const { return E_ - E0_ - W_; }
  double power() const { return t_ > 0 ? heat() / t_ : 0.0; }
  double released_power() const { return -power(); }

 private:
  double v_;
  bool started_ = false;
  double t_ = 0.0, F_ = 0.0, E_ = 0.0, E0_ = 0.0, W_ = 0.0;
};

// Mixed-state geometric phase along a sampled rho(t) path in the moving basis.
// Only eigenvectors with xi_k(0) above the weight floor contribute; each is followed by
// maximum overlap and its connection is accumulated as the phase of successive overlaps
// minus the trapezoid integral of <P_k|sigma_t|P_k>.
class GeometricPhase {
 public:
  explicit GeometricPhase(const CMat& rho0, double weight_floor = 1e-12);

  void update(const CMat& rho, const CMat& sigma_t, double dt);
  // same, from an explicit eigendecomposition (columns of vecs, eigenvalues xi)
  void update_eigen(const RVec& xi, const CMat& vecs, const CMat& sigma_t, double dt);

  // gamma(t) given the static overlap c0(t) (c0_{n,p} = <p(0)|n(t)>)
  double phase(const RMat& c0) const;
  bool degenerate() const { return degenerate_; }
  int contributors() const { return static_cast<int>(xi0_.size()); }

 private:
  std::vector<double> xi0_, xi_;
  CMat p0_, p_;
  std::vector<double> beta_;
  std::vector<double> sig_prev_;
  double floor_;
  bool degenerate_ = false;
};

}  // namespace ptf
