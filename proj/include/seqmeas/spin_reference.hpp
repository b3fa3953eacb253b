#pragma once

// Closed-form results for the spin-1/2 example: A = S_z, B = S_x, initial
// state |+><+|, probe widths sigma1 and sigma2. Kept independent of the
// generic engines so the two can be checked against each other.

#include "seqmeas/quantum_core.hpp"

namespace seqmeas::spin_reference {

struct SpinParams {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double x1 = 0.0;
  double x2 = 0.0;
};

/// 1/2 [[1, e^{-1/(8 sigma1^2)}], [e^{-1/(8 sigma1^2)}, 1]]
DensityMatrix rho1_closed(double sigma1);

/// 1/4 (1 - e^{-1/(4 sigma1^2)})
double var_sx_rho1_closed(double sigma1);

/// 1/2 (2 pi sigma1^2)^{-1/2} e^{-(x1^2 + 1/4)/(2 sigma1^2)}
///   [[e^{u}, 1], [1, e^{-u}]],  u = x1 / (2 sigma1^2)
DensityMatrix rhobar1_closed(double sigma1, double x1);

struct CondMoments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

/// Moments of x2 given x1: mean 1/(2 cosh u), second moment 1/4 + sigma2^2,
/// variance 1/4 tanh(u)^2 + sigma2^2.
CondMoments cond_moments_closed(double sigma1, double sigma2, double x1);

/// 1/4 tanh(x1 / (2 sigma1^2))^2
double var_sx_given_sz_closed(double sigma1, double x1);

/// 1/4 (s1 - 1) s2 / (s1 s2 - 2) with s1 = 1 + e^{1/(8 sigma1^2)} and
/// s2 = 1 + e^{x2/sigma2^2}, evaluated in logistic form so neither exponential
/// overflows. Throws DenominatorNonPositive if s1 s2 - 2 is lost to underflow.
double var_sz_given_sx_closed(double sigma1, double sigma2, double x2);

struct MpurSpinConstants {
  double r_a = 0.25;
  double r_b = 0.125;
};
MpurSpinConstants mpur_spin_constants();

}  // namespace seqmeas::spin_reference
