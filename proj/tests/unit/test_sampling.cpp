#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "seqmeas/conditional_model.hpp"
#include "seqmeas/joint_model.hpp"
#include "seqmeas/sampling.hpp"
#include "test_support.hpp"

using namespace seqmeas;
using namespace seqmeas::oracle;
using seqmeas::testing::random_stage;
using seqmeas::testing::SpinSetup;
using seqmeas::testing::stage;
using seqmeas::testing::throws_kind;

namespace {

constexpr double kFree = std::numeric_limits<double>::quiet_NaN();

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* old = std::getenv("SEQMEAS_THREADS")) saved_ = old;
    ::setenv("SEQMEAS_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (saved_.empty()) ::unsetenv("SEQMEAS_THREADS");
    else ::setenv("SEQMEAS_THREADS", saved_.c_str(), 1);
  }

 private:
  std::string saved_;
};

MeasurementChain four_stage_chain() {
  return MeasurementChain(DensityMatrix::from_pure(presets::ket_plus()),
                          {stage(presets::spin_z(), 0.5), stage(presets::spin_x(), 0.5),
                           stage(presets::spin_x(), 0.5), stage(presets::spin_z(), 0.5)});
}

}  // namespace

TEST(SplitMix64, KnownOutput) {
  // first output of the reference generator from state 0
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFull);
}

TEST(Rng, Deterministic) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    ASSERT_EQ(u, b.uniform());
    differs = differs || u != c.uniform();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(Rng::kAlgorithm, "mt19937_64");
}

TEST(Rng, SplitStreamsDifferAndAreStable) {
  const Rng root(7);
  Rng s0 = root.split(0), s1 = root.split(1), s0b = root.split(0);
  EXPECT_EQ(s0.seed(), s0b.seed());
  EXPECT_NE(s0.seed(), s1.seed());
  EXPECT_NE(s0.uniform(), s1.uniform());
}

TEST(Rng, UniformAndNormalMoments) {
  Rng rng(3);
  const int n = 400000;
  double su = 0, sz = 0, sz2 = 0, sz4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sz += z;
    sz2 += z * z;
    sz4 += z * z * z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(sz / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sz2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(sz4 / n, 3.0, 5 * std::sqrt(96.0 / n));
}

TEST(SamplerConfig, Validation) {
  SamplerConfig c;
  c.samples = 0;
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [&] { c.validate(); }));
  c.samples = 10;
  c.block = 0;
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [&] { c.validate(); }));
}

TEST(Jackknife, MatchesBruteForce) {
  Rng rng(5);
  std::vector<double> xs(57);
  for (double& x : xs) x = 3.0 * rng.normal() + 1.0;
  const VarianceEstimate v = jackknife_variance(xs);
  const auto var = [](const std::vector<double>& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
  };
  EXPECT_NEAR(v.variance, var(xs), 1e-12);
  std::vector<double> loo;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<double> rest = xs;
    rest.erase(rest.begin() + static_cast<long>(i));
    loo.push_back(var(rest));
  }
  const double mean = std::accumulate(loo.begin(), loo.end(), 0.0) / loo.size();
  double ss = 0;
  for (double l : loo) ss += (l - mean) * (l - mean);
  const double n = static_cast<double>(xs.size());
  EXPECT_NEAR(v.standard_error, std::sqrt((n - 1) / n * ss), 1e-12);
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [] {
    const double two[] = {1.0, 2.0};
    jackknife_variance(two);
  }));
}

TEST(SampleChain, ShapeAndDeterminismAcrossThreads) {
  const SpinSetup s(0.5, 0.7);
  const MeasurementChain c(s.rho0, {s.a, s.b});
  SamplerConfig cfg;
  cfg.samples = 50'000;
  cfg.seed = 9;
  cfg.block = 1000;
  OutcomeTable one, four;
  {
    ThreadsEnv env("1");
    one = sample_chain(c, cfg);
  }
  {
    ThreadsEnv env("4");
    four = sample_chain(c, cfg);
  }
  ASSERT_EQ(one.rows(), cfg.samples);
  ASSERT_EQ(one.stages, 2u);
  EXPECT_EQ(one.values, four.values);
  cfg.seed = 10;
  EXPECT_NE(sample_chain(c, cfg).values, one.values);
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidArgument, [&] { one.column(2); }));
}

TEST(SampleChain, VarianceLawsWithinStandardErrors) {
  Rng rng(81);
  for (std::size_t t = 0; t < 6; ++t) {
    const std::size_t d = 2 + t % 2;
    const DensityMatrix rho0 = random_density(d, rng);
    const MeasurementStage a = random_stage(d, rng);
    const MeasurementStage b = random_stage(d, rng);
    SamplerConfig cfg;
    cfg.samples = 200'000;
    cfg.seed = 100 + t;
    const OutcomeTable tab = sample_chain(MeasurementChain(rho0, {a, b}), cfg);
    const auto m1 = jackknife_variance(tab.column(0));
    const auto m2 = jackknife_variance(tab.column(1));
    // 4 SE here: 12 comparisons in this test
    EXPECT_LT(std::abs(m1.variance - pointer1_variance(rho0, a)) / m1.standard_error, 4.0) << t;
    EXPECT_LT(std::abs(m2.variance - pointer2_variance(rho0, a, b)) / m2.standard_error, 4.0) << t;
  }
}

TEST(SampleChain, SurvivesLongChainsWithoutRenormalizing) {
  Rng rng(82);
  std::vector<MeasurementStage> stages;
  for (int k = 0; k < 60; ++k) stages.push_back(stage(random_observable(3, rng), 0.05));
  const MeasurementChain c(random_density(3, rng), stages);
  SamplerConfig cfg;
  cfg.samples = 2000;
  const OutcomeTable tab = sample_chain(c, cfg);
  for (double v : tab.values) ASSERT_TRUE(std::isfinite(v));
}

TEST(McConditional, DirectPathMatchesForwardModel) {
  const SpinSetup s(0.5, 0.5);
  const MeasurementChain c(s.rho0, {s.a, s.b});
  SamplerConfig cfg;
  cfg.samples = 200'000;
  cfg.seed = 3;
  const McConditional mc = mc_conditional_variance(c, {1, {0.5, kFree}}, cfg);
  EXPECT_FALSE(mc.rejection);
  EXPECT_EQ(mc.acceptance, 1.0);
  const double exact = forward_stats(s.rho0, s.a, s.b, 0.5).variance;
  EXPECT_LT(std::abs(mc.estimate - exact) / mc.standard_error, 4.0);
}

TEST(McConditional, RejectionPathFourStageChain) {
  const MeasurementChain c = four_stage_chain();
  const ChainQuery q{1, {0.3, kFree, 0.1, -0.4}};
  SamplerConfig cfg;
  cfg.samples = 200'000;
  cfg.seed = 4;
  const McConditional mc = mc_conditional_variance(c, q, cfg);
  EXPECT_TRUE(mc.rejection);
  EXPECT_GT(mc.acceptance, 0.1);
  EXPECT_LT(std::abs(mc.estimate - 0.2581876633529904) / mc.standard_error, 4.0);
  // reproducible
  EXPECT_EQ(mc_conditional_variance(c, q, cfg).estimate, mc.estimate);
}

TEST(McConditional, StallIsReported) {
  const SpinSetup s(300.0, 0.01);
  const MeasurementChain c(s.rho0, {s.a, s.b});
  SamplerConfig cfg;
  cfg.samples = 1000;
  EXPECT_TRUE(throws_kind(ErrorKind::RejectionStall, [&] { mc_conditional_variance(c, {0, {kFree, -0.5}}, cfg); }));
}
