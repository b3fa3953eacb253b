#pragma once

#include "seqmeas/gaussian_pointer.hpp"

namespace seqmeas {

/// Mean and variance of one pointer outcome under a conditional density, and
/// the system-level variance left after removing the probe's own sigma^2.
struct OutcomeStats {
  double mean = 0.0;
  double variance = 0.0;
  /// variance - sigma^2 of the free stage. Roundoff in [-1e-9, 0) is reported
  /// as 0 with `clamped` set.
  double extracted_system_variance = 0.0;
  bool clamped = false;
  /// Set when variance - sigma^2 < -1e-9: the conditioned pointer spread is
  /// genuinely narrower than the probe itself. The negative value is reported
  /// unchanged in extracted_system_variance.
  bool sub_probe_width = false;
};

inline constexpr double kExtractedClampTol = 1e-9;

/// Probability density of one pointer outcome given all the others, stored as
/// an unnormalized GaussianPairSum in the free variable.
///
/// The true numerator is exp(log_scale) * numerator(x); normalization is the
/// integral of the stored numerator, so pdf() never touches log_scale.
class OutcomeDensity {
 public:
  /// Throws ZeroLikelihood when the integral is non-positive, non-finite, or
  /// lost in cancellation (below 1e-14 of the absolute term mass).
  OutcomeDensity(GaussianPairSum numerator, double log_scale, double free_sigma);

  const GaussianPairSum& numerator() const noexcept { return numerator_; }
  double log_scale() const noexcept { return log_scale_; }
  double normalization() const noexcept { return normalization_; }
  /// log of the integral of the true numerator (a marginal likelihood).
  double log_likelihood() const;
  double free_sigma() const noexcept { return free_sigma_; }

  double pdf(double x) const { return numerator_.evaluate(x) / normalization_; }

  OutcomeStats stats() const;

 private:
  GaussianPairSum numerator_;
  double log_scale_;
  double free_sigma_;
  double normalization_;
};

}  // namespace seqmeas
