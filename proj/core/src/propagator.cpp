#include "ptfric/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace ptf {

namespace {

const std::complex<double> I(0.0, 1.0);

struct Stage {
  double t = 0.0;
  RMat H, A;
  CMat K;  // H (+ u_rn A^2) - sigma_t
  SpectrumSnapshot snap;
  CMat S;
};

CMat commutator_rhs(const CMat& K, const CMat& rho) {
  const CMat w = -I * (K * rho);
  return w + w.adjoint();
}

CMat open_rhs_impl(const CMat& rho, const CMat& K, const RMat& A, const CMat& S) {
  const CMat y = S * rho;
  const CMat Ac = A.cast<std::complex<double>>();
  // (-i K rho - [A, S rho]) plus its adjoint
  const CMat w = -I * (K * rho) - Ac * y + y * Ac;
  return w + w.adjoint();
}

double spectral_width(const OperatorSet& ops) {
  const auto s = solve_snapshot(0.0, ops);
  return s.energies.maxCoeff() - s.energies.minCoeff();
}

}  // namespace

DensityMatrix initial_state(const OperatorSet& ops) {
  const auto s = solve_snapshot(0.0, ops);
  const CVec g = s.vectors.col(0).cast<std::complex<double>>();
  return {g * g.adjoint(), 0.0};
}

CMat closed_rhs(const CMat& rho, double t_bar, const OperatorSet& ops) {
  const CMat K = ops.hamiltonian(t_bar).cast<std::complex<double>>() - ops.drift();
  return commutator_rhs(K, rho);
}

CMat build_s_matrix(const RMat& A, const SpectrumSnapshot& snap, const RateFn& rate) {
  const int n = snap.size();
  const RMat& V = snap.vectors;
  const RMat At = V.transpose() * A * V;
  RMat mre(n, n), mim(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const std::complex<double> g = rate(snap.energies(k) - snap.energies(m));
      mre(m, k) = At(m, k) * g.real();
      mim(m, k) = At(m, k) * g.imag();
    }
  CMat S(n, n);
  S.real() = V * mre * V.transpose();
  S.imag() = V * mim * V.transpose();
  return S;
}

CMat build_s_matrix(const RMat& A, const SpectrumSnapshot& snap, const BathRates& rates) {
  return build_s_matrix(A, snap, [&rates](double e) { return rates(e); });
}

CMat open_rhs(const CMat& rho, double t_bar, const OperatorSet& ops, const BathRates& rates,
              const SpectrumSnapshot& snap) {
  const RMat H = ops.hamiltonian(t_bar);
  const RMat A = ops.coupling(t_bar);
  const double urn = renormalization_constant(rates.params());
  const CMat K = (H + urn * A * A).cast<std::complex<double>>() - ops.drift();
  if (rates.params().alpha == 0.0) return commutator_rhs(K, rho);
  return open_rhs_impl(rho, K, A, build_s_matrix(A, snap, rates));
}

double default_time_step(const OperatorSet& ops) {
  return std::min(0.5 / spectral_width(ops), ops.params().T_bar / 200000.0);
}

long steps_per_period(const OperatorSet& ops, const NumericsParams& np) {
  const double T = ops.params().T_bar;
  if (np.dt_bar > 0) return std::max(1L, std::lround(T / np.dt_bar));
  return static_cast<long>(std::ceil(T / default_time_step(ops) / 1000.0)) * 1000;
}

PropagationLog propagate(QuantumMode mode, const OperatorSet& ops, const BathParams& bp, const NumericsParams& np,
                         const Observer& obs, const PropagateOptions& opt) {
  const double T = ops.params().T_bar;
  const long per_period = steps_per_period(ops, np);
  const long stride = opt.output_stride > 0 ? opt.output_stride : std::max(1L, per_period / 1000);
  const double dt = T / per_period;
  const long steps = std::lround(np.t_max_periods * per_period);
  const bool open = mode == QuantumMode::open && bp.alpha > 0;
  const double urn = renormalization_constant(bp);

  PropagationLog log;
  log.dt_bar = dt;

  std::unique_ptr<BathRates> rates;
  if (open) rates = std::make_unique<BathRates>(bp, 1.25 * spectral_width(ops) + 1.0);

  SpectrumSnapshot ref = solve_snapshot(0.0, ops);
  auto make_stage = [&](double t, Stage& st) {
    st.t = t;
    st.H = ops.hamiltonian(t);
    if (mode == QuantumMode::open) {
      st.A = ops.coupling(t);
      st.K = (st.H + urn * st.A * st.A).cast<std::complex<double>>() - ops.drift();
    } else {
      st.K = st.H.cast<std::complex<double>>() - ops.drift();
    }
    if (open) {
      st.snap = phase_align(ref, solve_snapshot(t, ops), false);
      st.S = build_s_matrix(st.A, st.snap, *rates);
    }
  };
  auto rhs = [&](const CMat& rho, const Stage& st) {
    return open ? open_rhs_impl(rho, st.K, st.A, st.S) : commutator_rhs(st.K, rho);
  };

  CMat rho = initial_state(ops).entries;
  Stage s0, sh, s1;
  make_stage(0.0, s0);
  if (open) ref = s0.snap;

  SpectrumSnapshot out_ref = ref;
  auto emit = [&](double t, long step) {
    const double tr = rho.trace().real();
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    const double mineig = es.eigenvalues().minCoeff();
    log.records.push_back({t, std::abs(tr - 1.0), herm, mineig});
    log.min_eig = std::min(log.min_eig, mineig);
    if (mineig < opt.abort_min_eig) {
      std::ostringstream msg;
      msg << "negative density-matrix eigenvalue " << mineig << " at t=" << t << " (step " << step
          << "); reduce the time step or check the Markov regime";
      log.steps = step;
      throw NumericAbort(msg.str(), log);
    }
    if (obs.on_output) {
      if (open) {
        obs.on_output(t, rho, s0.snap);
      } else {
        out_ref = phase_align(out_ref, solve_snapshot(t, ops), false);
        obs.on_output(t, rho, out_ref);
      }
    }
  };

  if (obs.on_step) obs.on_step(0.0, rho);
  emit(0.0, 0);
  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    make_stage(t + 0.5 * dt, sh);
    if (open) ref = sh.snap;
    make_stage(t + dt, s1);
    if (open) ref = s1.snap;

    const CMat k1 = rhs(rho, s0);
    const CMat k2 = rhs(rho + (0.5 * dt) * k1, sh);
    const CMat k3 = rhs(rho + (0.5 * dt) * k2, sh);
    const CMat k4 = rhs(rho + dt * k3, s1);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    std::swap(s0, s1);

    const double tn = (k + 1) * dt;
    const double tr = rho.trace().real();
    log.max_trace_dev = std::max(log.max_trace_dev, std::abs(tr - 1.0));
    if (!std::isfinite(tr) || std::abs(tr - 1.0) > opt.abort_trace) {
      std::ostringstream msg;
      msg << "trace deviation " << std::abs(tr - 1.0) << " at t=" << tn << " (step " << k + 1
          << "); reduce the time step";
      log.steps = k + 1;
      throw NumericAbort(msg.str(), log);
    }
    if (opt.renormalize_trace) {
      rho /= tr;
      ++log.renormalizations;
    }
    if (obs.on_step) obs.on_step(tn, rho);
    if ((k + 1) % stride == 0 || k + 1 == steps) emit(tn, k + 1);
  }
  log.steps = steps;
  return log;
}

}  // namespace ptf
