#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "seqmeas/spin_reference.hpp"
#include "test_support.hpp"

using namespace seqmeas;
using namespace seqmeas::spin_reference;
using seqmeas::testing::throws_kind;

namespace {

// Direct transcription with exponentials, valid where nothing overflows.
double backward_direct(double s1, double s2, double x2) {
  const double e1 = 1.0 + std::exp(1.0 / (8.0 * s1 * s1));
  const double e2 = 1.0 + std::exp(x2 / (s2 * s2));
  return 0.25 * (e1 - 1.0) * e2 / (e1 * e2 - 2.0);
}

}  // namespace

TEST(SpinReference, BackactionCurve) {
  EXPECT_NEAR(var_sx_rho1_closed(0.2), 0.2495173865, 1e-10);
  EXPECT_NEAR(var_sx_rho1_closed(0.5), 0.25 * (1.0 - std::exp(-1.0)), 1e-16);
  // small-argument branch keeps relative accuracy
  EXPECT_NEAR(var_sx_rho1_closed(1e4) / (1.0 / (16.0 * 1e8)), 1.0, 1e-8);
  EXPECT_NEAR(var_sx_rho1_closed(0.01), 0.25, 1e-16);
}

TEST(SpinReference, Rho1) {
  const DensityMatrix r = rho1_closed(0.5);
  EXPECT_NEAR(r.normalized_matrix()(0, 1).real(), 0.5 * std::exp(-0.5), 1e-16);
  EXPECT_NEAR(r.trace(), 1.0, 1e-15);
}

TEST(SpinReference, RhobarTraceIsMarginalDensity) {
  for (double s1 : {0.1, 0.5, 2.0})
    for (double x1 : {-1.0, 0.0, 0.3}) {
      const DensityMatrix r = rhobar1_closed(s1, x1);
      // equal-weight mixture of N(+-1/2, s1^2)
      const double g = [&] {
        const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi * s1 * s1);
        return 0.5 * c * (std::exp(-std::pow(x1 - 0.5, 2) / (2 * s1 * s1)) + std::exp(-std::pow(x1 + 0.5, 2) / (2 * s1 * s1)));
      }();
      EXPECT_NEAR(r.trace(), g, 1e-14 * std::max(1.0, g));
    }
  // far outcome: trace underflows as a double but log_trace stays finite
  EXPECT_TRUE(std::isfinite(rhobar1_closed(0.01, 10.0).log_trace()));
}

TEST(SpinReference, ForwardMoments) {
  const CondMoments m = cond_moments_closed(0.5, 0.5, 0.5);
  EXPECT_NEAR(m.mean, 0.5 / std::cosh(1.0), 1e-16);
  EXPECT_NEAR(m.variance, m.second_moment - m.mean * m.mean, 1e-15);
  EXPECT_NEAR(var_sx_given_sz_closed(0.5, 0.5), 0.14500641459649345, 1e-16);
  EXPECT_EQ(var_sx_given_sz_closed(0.5, 0.0), 0.0);
}

TEST(SpinReference, BackwardLogisticMatchesDirect) {
  for (double s1 : {0.2, 0.5, 1.0, 3.0})
    for (double s2 : {0.3, 1.0, 2.0})
      for (double x2 = -1.0; x2 <= 1.0; x2 += 0.2)
        EXPECT_NEAR(var_sz_given_sx_closed(s1, s2, x2), backward_direct(s1, s2, x2),
                    1e-13 * std::max(1.0, backward_direct(s1, s2, x2)));
  // (1 + e^0.5 - 1)(1 + e^2) / ((1 + e^0.5)(1 + e^2) - 2) / 4
  EXPECT_NEAR(var_sz_given_sx_closed(0.5, 0.5, 0.5), 0.17100679567358412, 1e-15);
  EXPECT_NEAR(var_sz_given_sx_closed(0.7, 0.3, 0.0), 0.25, 1e-15);
}

TEST(SpinReference, BackwardExtremesStayFinite) {
  // strong first probe: e^{1/(8 sigma1^2)} overflows in the direct form
  EXPECT_NEAR(var_sz_given_sx_closed(0.01, 1.0, 0.3), 0.25, 1e-15);
  // e^{x2/sigma2^2} overflows; the limit is 1/4 (s1 - 1) / s1
  EXPECT_NEAR(var_sz_given_sx_closed(1.0, 0.01, 5.0), 0.25 / (1.0 + std::exp(-0.125)), 1e-15);
  // weak limit 1/8 (1 + e^{-y})
  EXPECT_NEAR(var_sz_given_sx_closed(1e3, 1.0, 0.5), 0.125 * (1.0 + std::exp(-0.5)), 1e-6);
}

TEST(SpinReference, DenominatorLostToUnderflow) {
  EXPECT_TRUE(throws_kind(ErrorKind::DenominatorNonPositive, [] { var_sz_given_sx_closed(1e200, 1.0, -1e6); }));
}

TEST(SpinReference, RejectsBadWidths) {
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { var_sx_rho1_closed(0.0); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { cond_moments_closed(1.0, -1.0, 0.0); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { var_sz_given_sx_closed(1.0, INFINITY, 0.0); }));
}

TEST(SpinReference, MpurConstants) {
  EXPECT_EQ(mpur_spin_constants().r_a, 0.25);
  EXPECT_EQ(mpur_spin_constants().r_b, 0.125);
}
