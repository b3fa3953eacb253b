#include "seqmeas/spin_reference.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace seqmeas::spin_reference {

namespace {

void require_sigma(double s, const char* name) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << s;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

/// 1 / (1 + e^{-t})
double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

DensityMatrix rho1_closed(double sigma1) {
  require_sigma(sigma1, "sigma1");
  const double off = 0.5 * std::exp(-1.0 / (8.0 * sigma1 * sigma1));
  ComplexMatrix m(2, 2);
  m << 0.5, off, off, 0.5;
  return DensityMatrix(m);
}

double var_sx_rho1_closed(double sigma1) {
  require_sigma(sigma1, "sigma1");
  return -0.25 * std::expm1(-1.0 / (4.0 * sigma1 * sigma1));
}

DensityMatrix rhobar1_closed(double sigma1, double x1) {
  require_sigma(sigma1, "sigma1");
  const double s2 = sigma1 * sigma1;
  const double u = x1 / (2.0 * s2);
  const double au = std::abs(u);
  ComplexMatrix shape(2, 2);
  shape << std::exp(u - au), std::exp(-au), std::exp(-au), std::exp(-u - au);
  const double log_scale = std::log(0.5) - 0.5 * std::log(2.0 * std::numbers::pi * s2) -
                           (x1 * x1 + 0.25) / (2.0 * s2) + au;
  return DensityMatrix::from_scaled(shape, log_scale);
}

CondMoments cond_moments_closed(double sigma1, double sigma2, double x1) {
  require_sigma(sigma1, "sigma1");
  require_sigma(sigma2, "sigma2");
  const double u = x1 / (2.0 * sigma1 * sigma1);
  const double t = std::tanh(u);
  CondMoments m;
  m.mean = 0.5 / std::cosh(u);
  m.second_moment = 0.25 + sigma2 * sigma2;
  m.variance = 0.25 * t * t + sigma2 * sigma2;
  return m;
}

double var_sx_given_sz_closed(double sigma1, double x1) {
  require_sigma(sigma1, "sigma1");
  const double t = std::tanh(x1 / (2.0 * sigma1 * sigma1));
  return 0.25 * t * t;
}

double var_sz_given_sx_closed(double sigma1, double sigma2, double x2) {
  require_sigma(sigma1, "sigma1");
  require_sigma(sigma2, "sigma2");
  // With p = 1/s1, q = 1/s2:
  //   (s1 - 1) s2 / (s1 s2 - 2) = (1 - p) / (1 - 2 p q)
  //   1 - p = logistic(t),  1 - 2 p q = tanh(t/2) + 2 p (1 - q),  1 - q = logistic(y)
  // where t = 1/(8 sigma1^2) and y = x2/sigma2^2.
  const double t = 1.0 / (8.0 * sigma1 * sigma1);
  const double y = x2 / (sigma2 * sigma2);
  const double p = logistic(-t);
  const double denom = std::tanh(0.5 * t) + 2.0 * p * logistic(y);
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "s1*s2 - 2 is not positive at sigma1=" << sigma1 << ", sigma2=" << sigma2 << ", x2=" << x2;
    throw Error(ErrorKind::DenominatorNonPositive, os.str());
  }
  return 0.25 * logistic(t) / denom;
}

MpurSpinConstants mpur_spin_constants() { return {0.25, 0.125}; }

}  // namespace seqmeas::spin_reference
