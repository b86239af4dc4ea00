#include "ptfric/special.hpp"

#include <cmath>
#include <stdexcept>

namespace ptf::special {

double laguerre(int n, double alpha, double x) {
  if (n < 0) throw std::invalid_argument("laguerre: negative degree");
  double l0 = 1.0;
  if (n == 0) return l0;
  double l1 = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double scaled_ei(double a) {
  if (a == 0.0) throw std::domain_error("scaled_ei: Ei is singular at 0");
  if (std::abs(a) < 40.0) return std::exp(-a) * std::expint(a);
  // e^{-a}Ei(a) ~ sum_k k!/a^{k+1}; the terms shrink until k ~ |a|
  double term = 1.0 / a, sum = term;
  for (int k = 1; k < 30; ++k) {
    term *= k / a;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

std::complex<double> trigamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw std::domain_error("trigamma: pole at non-positive integer");
  std::complex<double> acc{0.0, 0.0};
  while (std::abs(z) < 12.0 || z.real() < 6.0) {
    acc += 1.0 / (z * z);
    z += 1.0;
  }
  // Bernoulli asymptotic tail
  static constexpr double b2k[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6};
  const std::complex<double> iz = 1.0 / z, iz2 = iz * iz;
  std::complex<double> series = iz + 0.5 * iz2;
  std::complex<double> p = iz * iz2;
  for (double b : b2k) {
    series += b * p;
    p *= iz2;
  }
  return acc + series;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace ptf::special
