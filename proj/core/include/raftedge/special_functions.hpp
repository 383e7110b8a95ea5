#pragma once

namespace raftedge {

/// Bessel function of the first kind, order zero. Absolute error below 1e-10.
double bessel_j0(double x);

/// Modified Bessel function of the first kind, order zero.
double bessel_i0(double x);

/// exp(-|x|) * I0(x); stays finite for large arguments.
double bessel_i0_scaled(double x);

/// First-order Marcum Q function Q1(alpha, beta), alpha, beta >= 0.
/// Evaluated by adaptive quadrature of the defining integral; absolute error below 1e-8.
double marcum_q1(double alpha, double beta);

}  // namespace raftedge
