#pragma once

#include <complex>

namespace ptf::special {

// Generalized Laguerre L_n^{(alpha)}(x) by upward three-term recurrence.
double laguerre(int n, double alpha, double x);

// e^{-a} Ei(a) for real a != 0, finite for any |a| (asymptotic series past |a| = 40).
double scaled_ei(double a);

// psi'(z) = zeta(2, z), Hurwitz zeta at s = 2. z must not be a non-positive integer.
std::complex<double> trigamma(std::complex<double> z);

// log(n!) via lgamma.
double log_factorial(int n);

}  // namespace ptf::special
