#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ptfric/params.hpp"

using namespace ptf;
constexpr double pi = std::numbers::pi;

namespace {

ChainParams generic_chain(double d_over_a) {
  ChainParams c;
  c.a = 1.3;
  c.d = d_over_a * c.a;
  c.A_s = 2.0;
  c.d_s = 0.4;
  c.C_6 = 0.7;
  return c;
}

// direct sums over n in [-10^4, 10^4]
double brute_force(double x, const ChainParams& p) {
  double sr = 0.0, lr = 0.0;
  for (int n = -10000; n <= 10000; ++n) {
    const double u = x - n * p.a;
    sr += std::exp(-u * u / (2.0 * p.d * p.d_s));
    lr += 1.0 / std::pow(p.d * p.d + u * u, 3);
  }
  return p.A_s * std::exp(-p.d / p.d_s) * sr - p.C_6 * lr;
}

// (2/a) int_0^a V cos(2 pi x / a) dx by the periodic trapezoid rule
double first_harmonic(const ChainParams& p) {
  const int n = 4096;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = p.a * i / n;
    s += lattice_potential_exact(x, p) * std::cos(2.0 * pi * x / p.a);
  }
  return 2.0 * s / n;
}

}  // namespace

TEST_CASE("no interaction gives a flat zero potential") {
  ChainParams c = generic_chain(3.0);
  c.A_s = 0.0;
  c.C_6 = 0.0;
  for (double x : {0.0, 0.2, 0.77, 5.0}) CHECK(lattice_potential_exact(x, c) == 0.0);
  const auto cos = lattice_potential_cosine(c);
  CHECK(cos.U0 == 0.0);
  CHECK(cos.Delta0 == 0.0);
}

TEST_CASE("lattice potential is periodic and mirror symmetric") {
  for (double r : {0.5, 1.0, 3.0}) {
    const auto c = generic_chain(r);
    for (double x : {0.0, 0.11, 0.4, 0.93}) {
      const double v = lattice_potential_exact(x, c);
      CHECK(lattice_potential_exact(x + c.a, c) == doctest::Approx(v).epsilon(1e-12));
      CHECK(lattice_potential_exact(-x, c) == doctest::Approx(v).epsilon(1e-12));
      CHECK(lattice_potential_exact(c.a - x, c) == doctest::Approx(v).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form lattice sums match brute-force sums at d/a = 3") {
  auto c = generic_chain(3.0);
  c.d_s = 4.0;  // keeps the short-range part comparable to the vdW part
  for (double x : {0.0, 0.13, 0.5, 0.9, 1.2}) {
    const double ref = brute_force(x, c);
    CHECK(lattice_potential_exact(x, c) == doctest::Approx(ref).epsilon(1e-8));
  }
  c.A_s = 0.0;
  for (double x : {0.0, 0.3, 0.65}) CHECK(lattice_potential_exact(x, c) == doctest::Approx(brute_force(x, c)).epsilon(1e-8));
}

TEST_CASE("near-field brute-force agreement for the vdW closed form") {
  auto c = generic_chain(0.3);
  c.A_s = 0.0;
  for (double x : {0.0, 0.2, 0.65}) CHECK(lattice_potential_exact(x, c) == doctest::Approx(brute_force(x, c)).epsilon(1e-8));
}

TEST_CASE("cosine amplitude matches the first Fourier coefficient when the short-range harmonic dominates") {
  ChainParams c;
  c.a = 1.0;
  c.d = 4.0;
  c.A_s = 1.0;
  c.d_s = 0.225;
  c.C_6 = 1e-8;
  const auto cos = lattice_potential_cosine(c);
  CHECK(cos.far_regime);
  CHECK(0.5 * cos.U0 == doctest::Approx(first_harmonic(c)).epsilon(0.02));
  CHECK_FALSE(cos.flagged);
}

TEST_CASE("exact vdW harmonic carries the (1 + kd + (kd)^2/3) factor absent from the cosine form") {
  ChainParams c;
  c.a = 1.0;
  c.d = 1.5;
  c.A_s = 0.0;
  c.C_6 = 1.0;
  const double k = 2.0 * pi / c.a;
  const double lr = 3.0 * pi * c.C_6 / (8.0 * std::pow(c.d, 5) * c.a);
  const double kd = k * c.d;
  const double exact = -2.0 * lr * std::exp(-kd) * (1.0 + kd + kd * kd / 3.0);
  CHECK(first_harmonic(c) == doctest::Approx(exact).epsilon(1e-8));
  const auto cos = lattice_potential_cosine(c);
  CHECK(0.5 * cos.U0 == doctest::Approx(-2.0 * lr * std::exp(-kd)).epsilon(1e-12));
  CHECK(cos.flagged);
}

TEST_CASE("Delta0 + U0/2 is the period average of the exact potential") {
  const auto c = generic_chain(2.5);
  const auto cos = lattice_potential_cosine(c);
  double mean = 0.0;
  const int n = 4096;
  for (int i = 0; i < n; ++i) mean += lattice_potential_exact(c.a * i / n, c) / n;
  CHECK(cos.Delta0 + 0.5 * cos.U0 == doctest::Approx(mean).epsilon(1e-10));
}

TEST_CASE("close chains are marked outside the far regime") {
  CHECK_FALSE(lattice_potential_cosine(generic_chain(1.0)).far_regime);
}

TEST_CASE("system parameters from u0 and kappa") {
  const auto p = make_system_params(5.0, 1.0, 0.005);
  CHECK(p.eta == 2.5);
  CHECK(p.T_bar == doctest::Approx(2.0 * pi / 0.005).epsilon(1e-14));
  CHECK(p.T_bar * p.v_bar * p.kappa == doctest::Approx(2.0 * pi).epsilon(1e-14));
  CHECK(make_system_params(0.0, 1.0, 0.005).eta == 0.0);
  CHECK_THROWS_AS(make_system_params(-1.0, 1.0, 0.005), std::invalid_argument);
  CHECK_THROWS_AS(make_system_params(5.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("stick-slip condition eta > 1 iff u0 > 2 / kappa^2") {
  for (double kappa : {0.3, 1.0, 2.0})
    for (double u0 : {0.1, 1.0, 2.0, 5.0, 30.0}) {
      const auto p = make_system_params(u0, kappa, 0.01);
      CHECK((p.eta > 1.0) == (u0 > 2.0 / (kappa * kappa)));
    }
}

TEST_CASE("build_system_params from a chain") {
  const auto c = generic_chain(3.0);
  const auto p = build_system_params(c, 5.0, 0.005);
  CHECK(p.u0 == 5.0);
  CHECK(p.kappa == doctest::Approx(2.0 * pi / c.a));
  ChainParams sr_only = c;
  sr_only.C_6 = 0.0;
  const auto q = build_system_params(sr_only, std::nullopt, 0.005);
  CHECK(q.u0 == doctest::Approx(lattice_potential_cosine(sr_only).U0));
  CHECK_THROWS_AS(build_system_params(c, 5.0, -1.0), std::invalid_argument);
  ChainParams bad = c;
  bad.d = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
