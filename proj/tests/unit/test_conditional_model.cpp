#include <gtest/gtest.h>

#include <cmath>

#include "seqmeas/conditional_model.hpp"
#include "seqmeas/quadrature.hpp"
#include "seqmeas/spin_reference.hpp"
#include "test_support.hpp"

using namespace seqmeas;
using seqmeas::testing::kTrials;
using seqmeas::testing::random_stage;
using seqmeas::testing::SpinSetup;

namespace sr = seqmeas::spin_reference;

TEST(Forward, SpinGrid) {
  for (double s1 : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0})
    for (double s2 : {0.1, 0.5, 2.0})
      for (double x1 = -2.0; x1 <= 2.0; x1 += 0.25) {
        const SpinSetup s(s1, s2);
        const ConditionalStats st = forward_stats(s.rho0, s.a, s.b, x1);
        const auto m = sr::cond_moments_closed(s1, s2, x1);
        ASSERT_NEAR(st.extracted_system_variance, sr::var_sx_given_sz_closed(s1, x1), 1e-10);
        ASSERT_NEAR(st.mean, m.mean, 1e-12);
        ASSERT_NEAR(st.variance, m.variance, 1e-10);
      }
}

TEST(Forward, ReferenceValueAndEvenness) {
  const SpinSetup s(0.5, 0.5);
  // 1/4 tanh(1)^2
  EXPECT_NEAR(forward_stats(s.rho0, s.a, s.b, 0.5).extracted_system_variance, 0.14500641459649345, 1e-12);
  for (double x1 : {0.1, 0.7, 1.9})
    EXPECT_NEAR(forward_stats(s.rho0, s.a, s.b, x1).extracted_system_variance,
                forward_stats(s.rho0, s.a, s.b, -x1).extracted_system_variance, 1e-15);
}

TEST(Backward, SpinGrid) {
  for (double s1 : {0.1, 0.3, 0.5, 1.0, 3.0})
    for (double s2 : {0.1, 0.25, 0.5, 1.0, 3.0})
      for (double x2 = -1.0; x2 <= 1.0; x2 += 0.1) {
        const SpinSetup s(s1, s2);
        ASSERT_NEAR(backward_stats(s.rho0, s.a, s.b, x2).extracted_system_variance,
                    sr::var_sz_given_sx_closed(s1, s2, x2), 1e-9)
            << s1 << " " << s2 << " " << x2;
      }
}

TEST(Backward, ReferenceValue) {
  const SpinSetup s(0.5, 0.5);
  EXPECT_NEAR(backward_stats(s.rho0, s.a, s.b, 0.5).extracted_system_variance, 0.17100679567358412, 1e-12);
  const SpinSetup z(0.7, 0.4);
  EXPECT_NEAR(backward_stats(z.rho0, z.a, z.b, 0.0).extracted_system_variance, 0.25, 1e-12);
}

TEST(Backward, WeakLimit) {
  for (double s2 : {0.1, 0.25, 0.5, 1.0, 2.0})
    for (double x2 : {0.0, 0.2, 0.5, 1.0}) {
      const SpinSetup s(1e3, s2);
      EXPECT_NEAR(backward_stats(s.rho0, s.a, s.b, x2).extracted_system_variance,
                  0.125 * (1.0 + std::exp(-x2 / (s2 * s2))), 1e-4);
    }
}

TEST(WeakLimit, BothDirections) {
  const SpinSetup s(1e3, 1e3);
  for (double x : {-3000.0, -1000.0, 0.0, 1000.0, 3000.0}) {
    EXPECT_LT(forward_stats(s.rho0, s.a, s.b, x).extracted_system_variance, 1e-4) << x;
    EXPECT_NEAR(backward_stats(s.rho0, s.a, s.b, x).extracted_system_variance, 0.25, 1e-3) << x;
  }
}

TEST(Densities, NormalizeToOne) {
  oracle::QuadratureConfig qc;
  oracle::Rng rng(51);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 2;
    const DensityMatrix rho0 = oracle::random_density(d, rng);
    const MeasurementStage a = random_stage(d, rng);
    const MeasurementStage b = random_stage(d, rng);
    const double x1 = 2.0 * rng.uniform() - 1.0;
    const double x2 = 2.0 * rng.uniform() - 1.0;
    const ConditionalDensity f = forward_density(rho0, a, b, x1);
    const ConditionalDensity g = backward_density(rho0, a, b, x2);
    const auto& lb = b.observable.levels();
    const auto& la = a.observable.levels();
    const auto bpb = oracle::level_breakpoints(lb);
    const auto bpa = oracle::level_breakpoints(la);
    const double nf = oracle::integrate([&](double x) { return f.density.pdf(x); },
                                        oracle::padded_domain(lb.front(), lb.back(), b.sigma(), qc), qc, bpb)
                          .value;
    const double nb = oracle::integrate([&](double x) { return g.density.pdf(x); },
                                        oracle::padded_domain(la.front(), la.back(), a.sigma(), qc), qc, bpa)
                          .value;
    ASSERT_NEAR(nf, 1.0, 1e-8) << t;
    ASSERT_NEAR(nb, 1.0, 1e-8) << t;
    ASSERT_EQ(f.direction, Direction::Forward);
    ASSERT_EQ(g.direction, Direction::Backward);
  }
}

TEST(Densities, BayesConsistency) {
  oracle::Rng rng(52);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 2;
    const DensityMatrix rho0 = oracle::random_density(d, rng);
    const MeasurementStage a = random_stage(d, rng);
    const MeasurementStage b = random_stage(d, rng);
    const double x1 = 2.0 * rng.uniform() - 1.0;
    const double x2 = 2.0 * rng.uniform() - 1.0;
    const double joint = log_joint(rho0, a, b, x1, x2);
    const double via_x1 = log_marginal_x1(rho0, a, x1) + std::log(forward_density(rho0, a, b, x1).density.pdf(x2));
    const double via_x2 = log_marginal_x2(rho0, a, b, x2) + std::log(backward_density(rho0, a, b, x2).density.pdf(x1));
    ASSERT_NEAR(via_x1, joint, 1e-9) << t;
    ASSERT_NEAR(via_x2, joint, 1e-9) << t;
  }
}

TEST(ConditionalState, PsdAndLikelihood) {
  oracle::Rng rng(53);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 3;
    const DensityMatrix rho0 = oracle::random_density(d, rng);
    const MeasurementStage a = random_stage(d, rng);
    const double x1 = 4.0 * rng.uniform() - 2.0;
    const DensityMatrix c = conditional_state(rho0, a, x1);
    ASSERT_GE(eigh(c.normalized_matrix()).values[0], -1e-12);
    const double direct = (kraus_at(a, x1).matrix * rho0.normalized_matrix() * kraus_at(a, x1).matrix.adjoint())
                              .trace()
                              .real();
    ASSERT_NEAR(c.log_trace(), std::log(direct), 1e-10);
  }
}

TEST(ConditionalState, SpinMatchesClosedForm) {
  const SpinSetup s(0.5, 1.0);
  const DensityMatrix c = conditional_state(s.rho0, s.a, 0.3);
  const DensityMatrix ref = sr::rhobar1_closed(0.5, 0.3);
  EXPECT_LT(max_abs(c.normalized_matrix() - ref.normalized_matrix()), 1e-15);
  EXPECT_NEAR(c.log_trace(), ref.log_trace(), 1e-13);
}

TEST(ExtremeOutcomes, NoUnderflow) {
  const SpinSetup s(0.05, 0.05);
  // x1 = 40 pins S_z completely, leaving S_x maximally uncertain
  const ConditionalStats f = forward_stats(s.rho0, s.a, s.b, 40.0);
  EXPECT_NEAR(f.extracted_system_variance, 0.25, 1e-12);
  EXPECT_TRUE(std::isfinite(log_marginal_x1(s.rho0, s.a, 40.0)));
  const ConditionalStats g = backward_stats(s.rho0, s.a, s.b, -40.0);
  EXPECT_TRUE(std::isfinite(g.extracted_system_variance));
  EXPECT_TRUE(std::isfinite(log_marginal_x2(s.rho0, s.a, s.b, -40.0)));
}

TEST(ExtractedVariance, FlagsSubProbeWidth) {
  // Backward density with strongly negative x2 and narrow first probe gives
  // an x1 density narrower than the probe for some parameters; either the
  // value is non-negative or it carries a flag.
  oracle::Rng rng(54);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 2;
    const DensityMatrix rho0 = oracle::random_density(d, rng);
    const MeasurementStage a = random_stage(d, rng);
    const MeasurementStage b = random_stage(d, rng);
    const ConditionalStats st = backward_stats(rho0, a, b, 4.0 * rng.uniform() - 2.0);
    if (st.extracted_system_variance < 0.0) ASSERT_TRUE(st.sub_probe_width);
    if (st.sub_probe_width) ASSERT_LT(st.extracted_system_variance, -kExtractedClampTol);
    ASSERT_GE(st.variance, 0.0);
  }
}

TEST(Conditional, DimensionMismatch) {
  const SpinSetup s(0.5, 0.5);
  oracle::Rng rng(55);
  const MeasurementStage q = random_stage(3, rng);
  EXPECT_TRUE(seqmeas::testing::throws_kind(ErrorKind::DimensionMismatch, [&] { forward_stats(s.rho0, s.a, q, 0.0); }));
  EXPECT_TRUE(seqmeas::testing::throws_kind(ErrorKind::DimensionMismatch, [&] { backward_stats(s.rho0, q, s.b, 0.0); }));
}
