#include <gtest/gtest.h>

#include <cmath>

#include "seqmeas/kraus.hpp"
#include "seqmeas/quad_oracle.hpp"
#include "test_support.hpp"

using namespace seqmeas;
using seqmeas::testing::kTrials;
using seqmeas::testing::random_stage;
using seqmeas::testing::stage;

TEST(KrausAt, SpinReference) {
  const MeasurementStage s = stage(presets::spin_z(), 0.5);
  const KrausOperator k = kraus_at(s, 0.0);
  // S_z eigenbasis is computational: |up> has +1/2
  EXPECT_NEAR(k.matrix(0, 0).real(), 0.6956590034192663, 1e-15);
  EXPECT_NEAR(k.matrix(1, 1).real(), 0.6956590034192663, 1e-15);
  EXPECT_EQ(std::abs(k.matrix(0, 1)), 0.0);
  EXPECT_EQ(k.outcome, 0.0);

  const KrausOperator k2 = kraus_at(s, 0.5);
  EXPECT_NEAR(k2.matrix(0, 0).real(), amplitude(Pointer(0.5), 0.5, 0.5), 1e-15);
  EXPECT_NEAR(k2.matrix(1, 1).real(), amplitude(Pointer(0.5), 0.5, -0.5), 1e-15);
}

TEST(KrausAt, HermitianAndCommutesWithObservable) {
  oracle::Rng rng(31);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const MeasurementStage s = random_stage(2 + t % 3, rng);
    const ComplexMatrix m = kraus_at(s, 3.0 * rng.uniform() - 1.5).matrix;
    ASSERT_LT(hermitian_defect(m), 1e-14);
    ASSERT_LT(max_abs(m * s.observable.matrix() - s.observable.matrix() * m), 1e-12);
  }
}

TEST(EffectAt, EqualsKrausSquare) {
  oracle::Rng rng(32);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const MeasurementStage s = random_stage(3, rng);
    const double x = 2.0 * rng.uniform() - 1.0;
    const ComplexMatrix m = kraus_at(s, x).matrix;
    ASSERT_LT(max_abs(effect_at(s, x).value() - m.adjoint() * m), 1e-13);
  }
}

TEST(ScaledKraus, MatchesDirectAndSurvivesTails) {
  oracle::Rng rng(33);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const MeasurementStage s = random_stage(2 + t % 2, rng);
    const double x = 2.0 * rng.uniform() - 1.0;
    const ScaledKraus sk = scaled_kraus_at(s, x);
    ASSERT_NEAR(eigh(sk.matrix).values.maxCoeff(), 1.0, 1e-12);
    ASSERT_LT(max_abs(sk.matrix * std::exp(sk.log_scale) - kraus_at(s, x).matrix), 1e-13);
  }
  // plain amplitudes underflow this far out; the scaled form does not
  const MeasurementStage s = stage(presets::spin_z(), 0.1);
  EXPECT_EQ(max_abs(kraus_at(s, 8.0).matrix), 0.0);
  const ScaledKraus far = scaled_kraus_at(s, 8.0);
  EXPECT_NEAR(far.matrix(0, 0).real(), 1.0, 1e-15);
  EXPECT_GT(far.matrix(1, 1).real(), 0.0);
  EXPECT_TRUE(std::isfinite(far.log_scale));
}

TEST(LogLevelWeights, LevelOrder) {
  const MeasurementStage s = stage(presets::spin_x(), 0.3);
  const auto w = log_level_weights(s, 0.2);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], log_amplitude(Pointer(0.3), 0.2, -0.5), 1e-14);
  EXPECT_NEAR(w[1], log_amplitude(Pointer(0.3), 0.2, 0.5), 1e-14);
}

TEST(Completeness, SpinAndRandomQutrit) {
  oracle::QuadratureConfig qc;
  oracle::Rng rng(34);
  const Observable q = oracle::random_observable(3, rng);
  for (double sigma : {0.1, 0.5, 2.0, 10.0}) {
    EXPECT_LT(completeness_defect(stage(presets::spin_z(), sigma), qc), 1e-8) << sigma;
    EXPECT_LT(completeness_defect(stage(presets::spin_x(), sigma), qc), 1e-8) << sigma;
    EXPECT_LT(completeness_defect(stage(q, sigma), qc), 1e-8) << sigma;
  }
}

TEST(Completeness, TruncatedWindowShowsDefect) {
  oracle::QuadratureConfig qc;
  const MeasurementStage s = stage(presets::spin_z(), 1.0);
  EXPECT_GT(completeness_defect(s, oracle::Domain{-1.0, 1.0}, qc), 0.1);
}

TEST(TracePreservation, AveragedStateKeepsTrace) {
  oracle::QuadratureConfig qc;
  oracle::Rng rng(35);
  for (std::size_t t = 0; t < kTrials / 10; ++t) {
    const std::size_t d = 2 + t % 2;
    const DensityMatrix rho = oracle::random_density(d, rng);
    const MeasurementStage s = random_stage(d, rng);
    const ComplexMatrix avg = oracle::quad_averaged_state(rho.normalized_matrix(), s, qc);
    ASSERT_NEAR(avg.trace().real(), 1.0, 1e-9) << t;
    ASSERT_LT(hermitian_defect(avg), 1e-12);
  }
}

TEST(PostOutcomeState, PositiveSemidefinite) {
  oracle::Rng rng(36);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 3;
    const DensityMatrix rho = oracle::random_density(d, rng);
    const MeasurementStage s = random_stage(d, rng);
    const ScaledKraus m = scaled_kraus_at(s, 4.0 * rng.uniform() - 2.0);
    const ComplexMatrix post = m.matrix * rho.normalized_matrix() * m.matrix.adjoint();
    const Eigensystem es = eigh(hermitian_part(post));
    ASSERT_GE(es.values[0], -1e-13 * post.trace().real()) << t;
  }
}
