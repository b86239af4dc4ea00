#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ptfric/observables.hpp"
#include "ptfric/propagator.hpp"

using namespace ptf;
using cd = std::complex<double>;

namespace {

const SystemParams reference = make_system_params(5.0, 1.0, 0.005);
const BathParams bath{};

CMat random_hermitian(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  CMat h = m * m.adjoint();
  return h / h.trace().real();
}

SpectrumSnapshot aligned_snapshot(double t, const OperatorSet& ops) {
  return phase_align(solve_snapshot(0.0, ops), solve_snapshot(t, ops), false);
}

std::vector<CMat> collect(QuantumMode mode, const OperatorSet& ops, const BathParams& bp, NumericsParams np,
                          std::vector<double>* times = nullptr) {
  std::vector<CMat> out;
  Observer obs;
  obs.on_output = [&](double t, const CMat& rho, const SpectrumSnapshot&) {
    out.push_back(rho);
    if (times) times->push_back(t);
  };
  PropagateOptions opt;
  opt.output_stride = 1;
  propagate(mode, ops, bp, np, obs, opt);
  return out;
}

}  // namespace

TEST_CASE("initial state") {
  const OperatorSet free(make_system_params(0.0, 1.0, 0.005), 25);
  const auto r0 = initial_state(free).entries;
  CHECK(std::abs(r0(0, 0) - 1.0) < 1e-15);
  CHECK(r0.cwiseAbs().sum() == doctest::Approx(1.0));

  const OperatorSet ops(reference, 25);
  const auto rho = initial_state(ops).entries;
  CHECK(rho.trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((rho * rho).trace().real() == doctest::Approx(1.0).epsilon(1e-14));
  const double e = (rho * ops.hamiltonian(0.0).cast<cd>()).trace().real();
  CHECK(e == doctest::Approx(solve_snapshot(0.0, ops).energies(0)).epsilon(1e-13));
  CHECK(e == doctest::Approx(0.91).epsilon(0.02));
}

TEST_CASE("closed rhs algebra") {
  SystemParams still = make_system_params(0.0, 1.0, 1.0);
  still.v_bar = 0.0;  // static trap
  const OperatorSet s(still, 25);
  const CMat mixed = CMat::Identity(25, 25) / 25.0;
  CHECK(closed_rhs(mixed, 0.0, s).cwiseAbs().maxCoeff() == 0.0);

  const OperatorSet ops(reference, 25);
  const CMat rho = random_hermitian(25, 1);
  const CMat f = closed_rhs(rho, 321.0, ops);
  CHECK(std::abs(f.trace()) < 1e-13);
  CHECK((f - f.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  // a global energy shift leaves the generator unchanged
  const CMat K = ops.hamiltonian(321.0).cast<cd>() + 7.0 * CMat::Identity(25, 25) - ops.drift();
  const CMat shifted = -cd(0, 1) * (K * rho - rho * K);
  CHECK((shifted - f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed rhs equals the central difference of a fine propagation") {
  const OperatorSet ops(reference, 25);
  NumericsParams np;
  np.dt_bar = reference.T_bar / 400000.0;  // ~3.1e-3
  np.t_max_periods = 40.0 / 400000.0;
  std::vector<double> ts;
  const auto rhos = collect(QuantumMode::closed, ops, bath, np, &ts);
  REQUIRE(rhos.size() == 41);
  const double d = ts[1] - ts[0];
  for (int k : {5, 20, 35}) {
    const CMat fd = (rhos[k + 1] - rhos[k - 1]) / (2.0 * d);
    const CMat f = closed_rhs(rhos[k], ts[k], ops);
    const double rel = (fd - f).cwiseAbs().maxCoeff() / f.cwiseAbs().maxCoeff();
    MESSAGE("relative central-difference defect " << rel);
    CHECK(rel < 1e-4);
  }
}

TEST_CASE("open rhs reduces to the closed rhs without coupling") {
  const OperatorSet ops(reference, 25);
  BathParams off = bath;
  off.alpha = 0.0;
  const BathRates rates(off, 30.0);
  const CMat rho = random_hermitian(25, 2);
  for (double t : {0.0, 500.0}) CHECK((open_rhs(rho, t, ops, rates, aligned_snapshot(t, ops)) - closed_rhs(rho, t, ops)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("open rhs is trace free and Hermitian") {
  const OperatorSet ops(reference, 25);
  BathParams strong = bath;
  strong.alpha = 0.05;
  strong.theta = 0.5;
  const BathRates rates(strong, 40.0);
  for (unsigned seed : {3u, 4u, 5u}) {
    const CMat rho = random_hermitian(25, seed);
    const double t = 97.0 * seed;
    const CMat f = open_rhs(rho, t, ops, rates, aligned_snapshot(t, ops));
    CHECK(std::abs(f.trace()) < 1e-12);
    CHECK((f - f.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("S matrix identities") {
  const OperatorSet ops(reference, 25);
  const auto snap = aligned_snapshot(200.0, ops);
  const RMat A = ops.coupling(200.0);
  CHECK(build_s_matrix(A, snap, [](double) { return cd(0.0, 0.0); }).cwiseAbs().maxCoeff() == 0.0);
  const cd g0(0.013, -0.4);
  const CMat S = build_s_matrix(A, snap, [g0](double) { return g0; });
  CHECK((S - g0 * A.cast<cd>()).cwiseAbs().maxCoeff() < 1e-13);

  const BathRates rates(bath, 40.0);
  const auto s0 = aligned_snapshot(0.0, ops);
  const CMat Sp = build_s_matrix(ops.coupling(0.0), s0, rates);
  double gmax = 0.0;
  for (int m = 0; m < 25; ++m)
    for (int k = 0; k < 25; ++k) gmax = std::max(gmax, std::abs(rates(s0.energies(k) - s0.energies(m))));
  CHECK(Sp.allFinite());
  // spectral norm bound |S| <= max|Gamma| * |A|_F, entrywise a fortiori
  CHECK(Sp.cwiseAbs().maxCoeff() <= gmax * ops.coupling(0.0).norm() + 1e-15);
}

TEST_CASE("RK4 converges at fourth order") {
  const OperatorSet ops(make_system_params(5.0, 1.0, 0.15), 25);
  const double T = ops.params().T_bar;
  auto final_rho = [&](long n) {
    NumericsParams np;
    np.dt_bar = T / static_cast<double>(n);
    np.t_max_periods = 0.25;
    CMat last;
    Observer obs;
    obs.on_step = [&](double, const CMat& rho) { last = rho; };
    propagate(QuantumMode::closed, ops, bath, np, obs);
    return last;
  };
  const CMat a = final_rho(1000), b = final_rho(2000), c = final_rho(4000);
  const double e1 = (a - b).cwiseAbs().maxCoeff(), e2 = (b - c).cwiseAbs().maxCoeff();
  const double order = std::log2(e1 / e2);
  MESSAGE("observed order " << order);
  CHECK(order == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("short closed run keeps trace and purity") {
  const OperatorSet ops(reference, 25);
  NumericsParams np;
  np.t_max_periods = 0.05;
  double max_tr = 0.0, max_sl = 0.0;
  Observer obs;
  obs.on_output = [&](double, const CMat& rho, const SpectrumSnapshot& snap) {
    max_tr = std::max(max_tr, std::abs(rho.trace().real() - 1.0));
    max_sl = std::max(max_sl, std::abs(linear_entropy(rho)));
    const auto ep = energy_and_populations(rho, ops.hamiltonian(snap.t_bar), snap, 5);
    for (double p : ep.populations) {
      CHECK(p >= -1e-6);
      CHECK(p <= 1.0 + 1e-6);
    }
  };
  const auto log = propagate(QuantumMode::closed, ops, bath, np, obs);
  CHECK(max_tr < 1e-6);
  CHECK(max_sl < 1e-8);
  CHECK(log.max_trace_dev < 1e-6);
  CHECK(log.steps == 10000);
  CHECK(log.dt_bar == doctest::Approx(reference.T_bar / 200000.0));
}

TEST_CASE("open run without coupling reproduces the closed run") {
  const OperatorSet ops(reference, 25);
  NumericsParams np;
  np.t_max_periods = 0.01;
  BathParams off = bath;
  off.alpha = 0.0;
  const auto a = collect(QuantumMode::closed, ops, off, np);
  const auto b = collect(QuantumMode::open, ops, off, np);
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
  CHECK(worst < 1e-10);
}

TEST_CASE("numeric abort on an oversized step") {
  const OperatorSet ops(reference, 25);
  NumericsParams np;
  np.dt_bar = 0.6;
  np.t_max_periods = 0.05;
  CHECK_THROWS_AS(propagate(QuantumMode::closed, ops, bath, np, {}), NumericAbort);
}

TEST_CASE("hotter bath mixes the state faster") {
  const SystemParams p = make_system_params(5.0, 1.0, 0.15);
  const OperatorSet ops(p, 25);
  auto entropy_after = [&](double theta) {
    BathParams bp;
    bp.alpha = 5e-4;
    bp.theta = theta;
    NumericsParams np;
    np.dt_bar = 0.01;
    np.t_max_periods = 0.5;
    double entropy = 0.0;
    Observer obs;
    obs.on_output = [&](double, const CMat& rho, const SpectrumSnapshot&) { entropy = linear_entropy(rho); };
    propagate(QuantumMode::open, ops, bp, np, obs);
    return entropy;
  };
  const double hot = entropy_after(0.5), cold = entropy_after(0.01);
  MESSAGE("linear entropy after half a period: hot " << hot << " cold " << cold);
  CHECK(hot > cold);
}

TEST_CASE("open dynamics lose positivity only at first order in the coupling") {
  // Redfield dynamics are not completely positive; the most negative eigenvalue grows linearly
  // with alpha and does not depend on the step
  const OperatorSet ops(make_system_params(5.0, 1.0, 0.15), 25);
  auto min_eig = [&](double alpha, double dt) {
    BathParams bp;
    bp.alpha = alpha;
    NumericsParams np;
    np.dt_bar = dt;
    np.t_max_periods = 0.3;
    return propagate(QuantumMode::open, ops, bp, np, {}).min_eig;
  };
  const double a = min_eig(5e-4, 0.01), b = min_eig(1e-3, 0.01), c = min_eig(5e-4, 0.005);
  MESSAGE("min eigenvalues " << a << " " << b << " " << c);
  CHECK(a < 0.0);
  CHECK(b / a == doctest::Approx(2.0).epsilon(0.05));
  CHECK(c / a == doctest::Approx(1.0).epsilon(0.01));
}
