#include <gtest/gtest.h>

#include <cmath>

#include "seqmeas/presets.hpp"
#include "seqmeas/quantum_core.hpp"
#include "test_support.hpp"

using namespace seqmeas;
using seqmeas::testing::kTrials;
using seqmeas::testing::throws_kind;

TEST(Eigh, ReconstructsRandomHermitian) {
  oracle::Rng rng(11);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 1 + t % 6;
    const ComplexMatrix h = oracle::random_hermitian(d, rng);
    const Eigensystem es = eigh(h);
    const auto n = static_cast<Eigen::Index>(d);
    const ComplexMatrix back = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
    ASSERT_LT(max_abs(back - h), 1e-12 * std::max(1.0, max_abs(h))) << "trial " << t;
    ASSERT_LT(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(n, n)), 1e-12);
    for (Eigen::Index i = 1; i < n; ++i) ASSERT_LE(es.values[i - 1], es.values[i]);
  }
}

TEST(Eigh, DiagonalInputIsSortedNotRotated) {
  ComplexMatrix m = ComplexMatrix::Zero(3, 3);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  m(2, 2) = 0.5;
  const Eigensystem es = eigh(m);
  EXPECT_DOUBLE_EQ(es.values[0], -1.0);
  EXPECT_DOUBLE_EQ(es.values[1], 0.5);
  EXPECT_DOUBLE_EQ(es.values[2], 2.0);
  EXPECT_NEAR(std::abs(es.vectors(1, 0)), 1.0, 1e-15);
}

TEST(Eigh, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_TRUE(throws_kind(ErrorKind::NotHermitian, [&] { eigh(m); }));
}

TEST(GroupDegenerate, MergesWithinGap) {
  const double v[] = {-1.0, -1.0 + 1e-12, 0.0, 1.0, 1.0 + 1e-3};
  const auto groups = group_degenerate(v);
  ASSERT_EQ(groups.size(), 4u);
  EXPECT_EQ(groups[0].size(), 2u);
  EXPECT_EQ(groups[3].size(), 1u);
}

TEST(Observable, PauliLevels) {
  const Observable sz = presets::spin_z();
  ASSERT_EQ(sz.level_count(), 2u);
  EXPECT_DOUBLE_EQ(sz.levels()[0], -0.5);
  EXPECT_DOUBLE_EQ(sz.levels()[1], 0.5);
  const Observable sx = presets::spin_x();
  EXPECT_NEAR(sx.levels()[1], 0.5, 1e-15);
}

TEST(Observable, ProjectorsResolveIdentity) {
  oracle::Rng rng(12);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 4;
    const Observable obs = oracle::random_observable(d, rng);
    const auto n = static_cast<Eigen::Index>(d);
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    ComplexMatrix spectral = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < obs.level_count(); ++i) {
      const ComplexMatrix& p = obs.projectors()[i];
      ASSERT_LT(max_abs(p * p - p), 1e-12);
      sum += p;
      spectral += obs.levels()[i] * p;
    }
    ASSERT_LT(max_abs(sum - ComplexMatrix::Identity(n, n)), 1e-12);
    ASSERT_LT(max_abs(spectral - obs.matrix()), 1e-12);
  }
}

TEST(Observable, DegenerateSpectrumGroupsLevels) {
  const double ev[] = {1.0, 1.0, -2.0};
  const Observable obs = Observable::from_spectrum(ev, ComplexMatrix::Identity(3, 3));
  ASSERT_EQ(obs.level_count(), 2u);
  EXPECT_NEAR(obs.projectors()[1].trace().real(), 2.0, 1e-15);
  // columns are sorted: -2 first, then the doubled level
  EXPECT_EQ(obs.level_of(0), 0u);
  EXPECT_EQ(obs.level_of(1), obs.level_of(2));
}

TEST(Observable, FromSpectrumValidates) {
  const double ev[] = {0.0, 1.0};
  EXPECT_TRUE(throws_kind(ErrorKind::DimensionMismatch,
                          [&] { Observable::from_spectrum(ev, ComplexMatrix::Identity(3, 3)); }));
  ComplexMatrix skew = ComplexMatrix::Identity(2, 2);
  skew(0, 1) = 0.3;
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [&] { Observable::from_spectrum(ev, skew); }));
}

TEST(PureState, Validation) {
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { PureState(ComplexVector(0)); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { PureState(ComplexVector::Ones(2)); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] { PureState::normalized(ComplexVector::Zero(2)); }));
  const PureState s = PureState::normalized(ComplexVector::Ones(4));
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
}

TEST(DensityMatrix, Validation) {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = Complex(0.0, 0.2);
  EXPECT_TRUE(throws_kind(ErrorKind::NotHermitian, [&] { DensityMatrix{bad}; }));
  ComplexMatrix neg = ComplexMatrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  EXPECT_TRUE(throws_kind(ErrorKind::NotPositive, [&] { DensityMatrix{neg}; }));
  EXPECT_TRUE(throws_kind(ErrorKind::NotPositive, [] { DensityMatrix{ComplexMatrix::Zero(2, 2)}; }));
}

TEST(DensityMatrix, KeepsTraceInLogScale) {
  const DensityMatrix rho(3.0 * ComplexMatrix::Identity(2, 2));
  EXPECT_NEAR(rho.log_trace(), std::log(6.0), 1e-15);
  EXPECT_TRUE(rho.normalized().is_normalized());
  EXPECT_NEAR(rho.trace(), 6.0, 1e-14);

  // far outside double range, still representable
  const DensityMatrix tiny = DensityMatrix::from_scaled(ComplexMatrix::Identity(2, 2), -2000.0);
  EXPECT_NEAR(tiny.log_trace(), -2000.0 + std::log(2.0), 1e-12);
  EXPECT_NEAR(tiny.normalized_matrix()(0, 0).real(), 0.5, 1e-15);
  EXPECT_TRUE(throws_kind(ErrorKind::ZeroLikelihood,
                          [] { DensityMatrix::from_scaled(ComplexMatrix::Zero(2, 2), 0.0); }));
}

TEST(Variance, SpinValues) {
  const DensityMatrix plus = DensityMatrix::from_pure(presets::ket_plus());
  EXPECT_NEAR(variance_of(presets::spin_z(), plus), 0.25, 1e-15);
  EXPECT_NEAR(variance_of(presets::spin_x(), plus), 0.0, 1e-15);
  EXPECT_NEAR(expectation(presets::spin_x().matrix(), plus), 0.5, 1e-15);
  EXPECT_NEAR(variance_of(presets::spin_y().matrix(), presets::ket_up()), 0.25, 1e-15);
}

TEST(Variance, NonNegativeOnRandomStates) {
  oracle::Rng rng(13);
  for (std::size_t t = 0; t < kTrials; ++t) {
    const std::size_t d = 2 + t % 3;
    const DensityMatrix rho = oracle::random_density(d, rng);
    const Observable obs = oracle::random_observable(d, rng);
    ASSERT_GE(variance_of(obs, rho), -1e-14);
  }
}

TEST(Presets, PauliAlgebra) {
  const ComplexMatrix x = presets::pauli_x(), y = presets::pauli_y(), z = presets::pauli_z();
  EXPECT_LT(max_abs(x * y - Complex(0.0, 1.0) * z), 1e-15);
  EXPECT_LT(max_abs(x * x - ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(RequireSameDim, Throws) {
  EXPECT_TRUE(throws_kind(ErrorKind::DimensionMismatch, [] { require_same_dim(2, 3, "x"); }));
  EXPECT_NO_THROW(require_same_dim(3, 3, "x"));
}
