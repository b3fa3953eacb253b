#include "seqmeas/outcome_density.hpp"

#include <cmath>
#include <sstream>

namespace seqmeas {

OutcomeDensity::OutcomeDensity(GaussianPairSum numerator, double log_scale, double free_sigma)
    : numerator_(std::move(numerator)), log_scale_(log_scale), free_sigma_(free_sigma) {
  Pointer{free_sigma};
  normalization_ = sum_moment(numerator_, 0);
  double mass = 0.0;
  for (const auto& t : numerator_.terms()) {
    mass += std::abs(t.coeff) * overlap(Pointer{t.sigma}, t.center_a, t.center_b);
  }
  if (!(normalization_ > 1e-14 * mass) || !std::isfinite(normalization_) || !std::isfinite(log_scale_)) {
    std::ostringstream os;
    os << "conditioning outcomes have vanishing likelihood (normalization " << normalization_
       << ", term mass " << mass << ")";
    throw Error(ErrorKind::ZeroLikelihood, os.str());
  }
}

double OutcomeDensity::log_likelihood() const { return log_scale_ + std::log(normalization_); }

OutcomeStats OutcomeDensity::stats() const {
  const PairSumMoments m = sum_moments(numerator_);
  OutcomeStats s;
  s.mean = m.m1 / m.m0;
  s.variance = m.m2 / m.m0 - s.mean * s.mean;
  if (s.variance < 0.0) s.variance = 0.0;

  double raw = m.center_variance;
  if (!numerator_.uniform_sigma()) raw = s.variance - free_sigma_ * free_sigma_;
  if (raw >= 0.0) {
    s.extracted_system_variance = raw;
  } else if (raw >= -kExtractedClampTol) {
    s.extracted_system_variance = 0.0;
    s.clamped = true;
  } else {
    s.extracted_system_variance = raw;
    s.sub_probe_width = true;
  }
  return s;
}

}  // namespace seqmeas
