#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptfric/bath.hpp"
#include "ptfric/operators.hpp"
#include "ptfric/spectrum.hpp"

namespace ptf {

struct DensityMatrix {
  CMat entries;
  double t_bar = 0.0;
};

enum class QuantumMode { closed, open };

struct StepRecord {
  double t_bar = 0.0;
  double trace_dev = 0.0;
  double herm_dev = 0.0;
  double min_eig = 0.0;
};

struct PropagationLog {
  std::vector<StepRecord> records;
  double dt_bar = 0.0;
  long steps = 0;
  double max_trace_dev = 0.0;
  double min_eig = 0.0;
  long renormalizations = 0;
};

class NumericAbort : public std::runtime_error {
 public:
  NumericAbort(const std::string& what, PropagationLog log) : std::runtime_error(what), log_(std::move(log)) {}
  const PropagationLog& log() const { return log_; }

 private:
  PropagationLog log_;
};

using RateFn = std::function<std::complex<double>(double)>;

DensityMatrix initial_state(const OperatorSet& ops);

// -i [H - sigma_t, rho]
CMat closed_rhs(const CMat& rho, double t_bar, const OperatorSet& ops);

// S = V [(V^T A V) o Gamma] V^T with Gamma_{m,m'} = Gamma(E_m' - E_m), V the eigenvector columns.
CMat build_s_matrix(const RMat& A, const SpectrumSnapshot& snap, const RateFn& rate);
CMat build_s_matrix(const RMat& A, const SpectrumSnapshot& snap, const BathRates& rates);

// -i [H + u_rn A^2 - sigma_t, rho] - ([A, S rho] + h.c.)
CMat open_rhs(const CMat& rho, double t_bar, const OperatorSet& ops, const BathRates& rates,
              const SpectrumSnapshot& snap);

// min(0.5 / max|E_n - E_m|, T/200000) with the spectral width taken at t = 0
double default_time_step(const OperatorSet& ops);

// Steps per period: T / np.dt_bar when set, otherwise the default step rounded to a multiple of 1000.
long steps_per_period(const OperatorSet& ops, const NumericsParams& np);

struct PropagateOptions {
  long output_stride = 0;  // steps between outputs; 0 selects T/1000
  bool renormalize_trace = false;
  double abort_trace = 1e-3;
  double abort_min_eig = -1e-3;
};

struct Observer {
  // every step, after the update (and once at t = 0)
  std::function<void(double t_bar, const CMat& rho)> on_step;
  // at the output stride (and at t = 0) with the phase-aligned snapshot
  std::function<void(double t_bar, const CMat& rho, const SpectrumSnapshot& snap)> on_output;
};

// Fixed-step RK4 from t = 0 to np.t_max_periods * T. Throws NumericAbort on trace deviation
// or negative eigenvalues beyond the thresholds.
PropagationLog propagate(QuantumMode mode, const OperatorSet& ops, const BathParams& bp, const NumericsParams& np,
                         const Observer& obs, const PropagateOptions& opt = {});

}  // namespace ptf
