#pragma once

#include "vibron/quantum_state.hpp"

namespace vibron {

/// Number-projected coherent state (sigma^dag + x tau_x^dag + y tau_y^dag)^N / sqrt(N! (1+x^2+y^2)^N)
/// on the full cartesian basis.
QuantumState coherent3(double x, double y, int n_total);

/// sum_n sqrt(C(N,n)) sin^n(theta/2) cos^(N-n)(theta/2) e^{-i(N-n)phi} |n, N-n, 0> on the full
/// cartesian basis.
QuantumState spin_coherent2(double theta, double phi, int n_total);

/// theta = 2 atan(x); ConfigError for negative x (see bloch_angles).
double theta_of_x(double x);

struct BlochAngles {
  double theta;
  double phi;
};

/// Angles of the mode-x coherent state for any real x: negative x maps to phi = pi.
BlochAngles bloch_angles(double x);

}  // namespace vibron
