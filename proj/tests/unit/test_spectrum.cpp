#include <doctest.h>

#include <cmath>

#include "ptfric/spectrum.hpp"

using namespace ptf;

namespace {
const SystemParams reference = make_system_params(5.0, 1.0, 0.005);
}

TEST_CASE("free oscillator spectrum") {
  const auto s = solve_snapshot(123.0, make_system_params(0.0, 1.0, 0.005), 25);
  for (int n = 0; n < 25; ++n) CHECK(s.energies(n) == doctest::Approx(n + 0.5).epsilon(1e-14));
}

TEST_CASE("snapshot invariants") {
  const auto s = solve_snapshot(0.3 * reference.T_bar, reference, 25);
  for (int n = 1; n < 25; ++n) CHECK(s.energies(n) >= s.energies(n - 1));
  CHECK((s.vectors.transpose() * s.vectors - RMat::Identity(25, 25)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(s.size() == 25);
}

TEST_CASE("lowest five levels are converged at n_size = 25") {
  for (double frac : {0.0, 0.25, 0.5, 0.75}) {
    const double t = frac * reference.T_bar;
    const auto a = solve_snapshot(t, reference, 25), b = solve_snapshot(t, reference, 50);
    for (int n = 0; n < 5; ++n) CHECK(std::abs(a.energies(n) - b.energies(n)) < 1e-6);
  }
}

TEST_CASE("double-well gap at half period is small and positive") {
  const auto s = solve_snapshot(0.5 * reference.T_bar, reference, 60);
  const double gap = s.energies(1) - s.energies(0);
  CHECK(gap > 0.0);
  CHECK(gap < 0.1);
}

TEST_CASE("truncated eigenvalues decrease monotonically with basis size") {
  for (double frac : {0.1, 0.5, 0.8}) {
    const double t = frac * reference.T_bar;
    auto prev = solve_snapshot(t, reference, 10);
    for (int n = 12; n <= 30; n += 2) {
      const auto cur = solve_snapshot(t, reference, n);
      for (int k = 0; k < 10; ++k) CHECK(cur.energies(k) <= prev.energies(k) + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("spectrum is periodic in time") {
  for (double t : {0.0, 200.0, 700.0}) {
    const auto a = solve_snapshot(t, reference, 25), b = solve_snapshot(t + reference.T_bar, reference, 25);
    CHECK((a.energies - b.energies).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("phase_align examples") {
  const auto s = solve_snapshot(100.0, reference, 25);
  const auto same = phase_align(s, s);
  CHECK((same.vectors - s.vectors).cwiseAbs().maxCoeff() == 0.0);
  auto flipped = s;
  flipped.vectors.col(0) *= -1.0;
  const auto undone = phase_align(s, flipped);
  CHECK((undone.vectors - s.vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phase-aligned paths are continuous") {
  const auto a = solve_snapshot(300.0, reference, 25);
  for (double d : {1e-1, 1e-2, 1e-3}) {
    const auto b = phase_align(a, solve_snapshot(300.0 + d, reference, 25));
    for (int n = 0; n < 5; ++n) CHECK(a.vectors.col(n).dot(b.vectors.col(n)) > 1.0 - 10.0 * d);
  }
}

TEST_CASE("tracking across the half-period anticrossing keeps continuous energies") {
  const double t0 = 0.5 * reference.T_bar - 0.2, dt = 1e-3;
  auto prev = solve_snapshot(t0, reference, 25);
  double max_jump = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const auto cur = phase_align(prev, solve_snapshot(t0 + k * dt, reference, 25));
    for (int n = 0; n < 5; ++n) {
      max_jump = std::max(max_jump, std::abs(cur.energies(n) - prev.energies(n)));
      CHECK(prev.vectors.col(n).dot(cur.vectors.col(n)) >= 0.0);
    }
    prev = cur;
  }
  // dE/dt is bounded by v |dE/dx_c| < 0.02 away from exact crossings
  CHECK(max_jump < 1e-4);
}

TEST_CASE("Landau-Zener velocities of the reference parameters") {
  const auto acs = find_anticrossings(reference, 25, 5, period_grid(reference));
  REQUIRE(acs.size() == 4);
  const double ref[] = {8.39e-4, 1.75e-2, 1.25e-1, 4.50e-1};
  for (int i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(acs[i].n == i);
    CHECK(acs[i].n2 == i + 1);
    CHECK(acs[i].gap > 0.0);
    CHECK(acs[i].v_lz == doctest::Approx(ref[i]).epsilon(0.05));
  }
}

TEST_CASE("no anticrossings without corrugation or in the deep-lattice regime") {
  const auto flat = make_system_params(0.0, 1.0, 0.005);
  CHECK(find_anticrossings(flat, 25, 5, period_grid(flat)).empty());
  const auto deep = make_system_params(5.0, 10.0, 0.005);
  CHECK(find_anticrossings(deep, 25, 5, period_grid(deep)).empty());
}

TEST_CASE("Landau-Zener probabilities") {
  CHECK(lz_probability(8.39e-4, 0.005) == doctest::Approx(0.845).epsilon(0.002));
  CHECK(lz_probability(1.75e-2, 0.012) == doctest::Approx(0.233).epsilon(0.01));
  CHECK(lz_probability(8.39e-4, 1e12) == doctest::Approx(1.0));
  double prev = 0.0;
  for (double v = 1e-4; v < 10.0; v *= 1.7) {
    const double p = lz_probability(0.01, v);
    CHECK(p > prev);
    CHECK(p < 1.0);
    prev = p;
  }
}

TEST_CASE("per-eigenstate slip times") {
  const auto ts = eigenstate_slip_times(reference, 25, 5);
  REQUIRE(ts.size() == 5);
  REQUIRE(ts[0]);
  REQUIRE(ts[1]);
  REQUIRE(ts[2]);
  CHECK(*ts[0] == doctest::Approx(0.485).epsilon(0.005 / 0.485));
  CHECK(*ts[1] == doctest::Approx(0.519).epsilon(0.005 / 0.519));
  CHECK(*ts[2] == doctest::Approx(0.578).epsilon(0.005 / 0.578));
  CHECK_FALSE(ts[3]);
  CHECK_FALSE(ts[4]);
}

TEST_CASE("classical barrier exists only in the double-well window") {
  CHECK(classical_barrier(0.5 * reference.T_bar * reference.v_bar, reference));
  CHECK_FALSE(classical_barrier(0.0, make_system_params(0.5, 1.0, 0.005)));
}

TEST_CASE("convergence scan decreases toward the reference size") {
  const auto grid = period_grid(reference, 41);
  const auto scan = convergence_scan(reference, {10, 15, 20, 25, 40}, 5, grid);
  REQUIRE(scan.size() >= 4);
  CHECK(scan[0].max_abs_diff > scan[3].max_abs_diff);
  CHECK(scan[3].max_abs_diff < 1e-6);
}
