#pragma once

// Closed-form algebra of zero-mean Gaussian pointer wavefunctions
//   psi(x) = (2 pi sigma^2)^(-1/4) exp(-x^2 / (4 sigma^2))
// and of products psi(x - a) psi(x - a'), which are the only integrands that
// pointer read-out statistics ever produce.

#include <vector>

#include "seqmeas/quantum_core.hpp"

namespace seqmeas {

/// Probe width. Small sigma is a strong measurement, large sigma a weak one.
class Pointer {
 public:
  explicit Pointer(double sigma);
  double sigma() const noexcept { return sigma_; }
  double variance() const noexcept { return sigma_ * sigma_; }

 private:
  double sigma_;
};

/// psi(x - a)
double amplitude(const Pointer& p, double x, double a);
/// log psi(x - a), finite for any finite x.
double log_amplitude(const Pointer& p, double x, double a);

/// <psi(x - a') | psi(x - a)> = exp(-(a - a')^2 / (8 sigma^2))
double overlap(const Pointer& p, double a, double aprime);

/// Integral of x^n psi(x - a) psi(x - a') for n in {0, 1, 2}. The product is
/// overlap(a, a') times a normal density with mean (a + a')/2 and variance
/// sigma^2. Throws InvalidOrder for other n.
double pair_moment(const Pointer& p, double a, double aprime, int n);

struct GaussianPairTerm {
  Complex coeff;
  double center_a = 0.0;
  double center_b = 0.0;
  double sigma = 1.0;
};

/// Finite sum  sum_t coeff_t psi_t(x - a_t) psi_t(x - b_t).
///
/// Real-valued (as a function of x) when the coefficient matrix is Hermitian;
/// sum_moment enforces that through the imaginary residue.
class GaussianPairSum {
 public:
  GaussianPairSum() = default;
  explicit GaussianPairSum(std::vector<GaussianPairTerm> terms);

  void add(const GaussianPairTerm& term);
  void add(Complex coeff, double a, double b, double sigma);

  const std::vector<GaussianPairTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Real part of the sum at x.
  double evaluate(double x) const;

  /// True when every term shares one width (always the case for a single
  /// stage's outcome density).
  bool uniform_sigma() const;

 private:
  std::vector<GaussianPairTerm> terms_;
};

/// sum_t Re(coeff_t * pair_moment_t). Throws NonHermitianSum if the
/// imaginary part exceeds 1e-8 relative to the absolute term mass.
double sum_moment(const GaussianPairSum& s, int n);

/// Moments (0, 1, 2) plus the centered second moment of the term centers.
///
/// For a uniform-width sum, m2/m0 - (m1/m0)^2 equals sigma^2 plus
/// `center_variance`; computing the latter directly avoids the cancellation of
/// subtracting sigma^2 when sigma is large.
struct PairSumMoments {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double center_variance = 0.0;
};
PairSumMoments sum_moments(const GaussianPairSum& s);

}  // namespace seqmeas
