#pragma once

#include <Eigen/Dense>

#include "ptfric/params.hpp"

namespace ptf {

using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

enum class OpKind { hamiltonian, corrugation, drift, coupling, position, momentum, overlap };

struct OperatorMatrix {
  CMat entries;
  double t_bar = 0.0;
  OpKind kind = OpKind::hamiltonian;
};

// Time-independent pieces of every operator in the moving oscillator basis.
// cos(kappa x) = cos(c) Crel - sin(c) Srel and sin(kappa x) = sin(c) Crel + cos(c) Srel,
// where c = kappa v t and Crel, Srel are the matrices of cos/sin(kappa y) in y = x - v t.
class OperatorSet {
 public:
  OperatorSet(const SystemParams& p, int n_size);

  int size() const { return n_; }
  const SystemParams& params() const { return p_; }

  RMat corrugation(double t_bar) const;  // V = -(1/2) cos(kappa x)
  RMat hamiltonian(double t_bar) const;  // diag(n + 1/2 + u0/2) + u0 V
  RMat coupling(double t_bar) const;     // A = sin(kappa x)
  RMat cos_kx(double t_bar) const;
  const CMat& drift() const { return drift_; }  // v_bar * momentum
  const RMat& position() const { return x_rel_; }
  const CMat& momentum() const { return p_rel_; }
  const RMat& cos_rel() const { return c_rel_; }
  const RMat& sin_rel() const { return s_rel_; }

  // c0_{n,p}(t) = <p(0)|n(t)>, the moving basis expanded on the t = 0 basis.
  RMat static_overlap(double t_bar) const;

 private:
  SystemParams p_;
  int n_;
  RMat c_rel_, s_rel_, x_rel_;
  CMat p_rel_, drift_;
  RVec diag_;
};

OperatorMatrix corrugation_matrix(double t_bar, const SystemParams& p, int n_size);
OperatorMatrix hamiltonian_matrix(double t_bar, const SystemParams& p, int n_size);
OperatorMatrix drift_matrix(double v_bar, int n_size);
OperatorMatrix coupling_matrix(double t_bar, const SystemParams& p, int n_size);
std::pair<OperatorMatrix, OperatorMatrix> position_momentum_matrices(int n_size);
OperatorMatrix static_overlap(double t_bar, double v_bar, int n_size);

}  // namespace ptf
