#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>

#include "csv.hpp"
#include "seqmeas/chain.hpp"
#include "seqmeas/conditional_model.hpp"
#include "seqmeas/joint_model.hpp"
#include "seqmeas/mpur.hpp"
#include "seqmeas/presets.hpp"
#include "seqmeas/quad_oracle.hpp"
#include "seqmeas/random_instances.hpp"
#include "seqmeas/sampling.hpp"
#include "seqmeas/spin_reference.hpp"

namespace seqmeas::cli {

namespace {

using oracle::Rng;

CheckResult run_check(const std::string& suite, const std::string& name, double tol, std::size_t trials,
                      const std::function<double()>& worst) {
  CheckResult r{suite, name, false, 0.0, tol, trials, {}};
  try {
    r.value = worst();
    r.passed = std::isfinite(r.value) && r.value <= tol;
  } catch (const std::exception& e) {
    r.value = std::nan("");
    r.detail = e.what();
  }
  return r;
}

/// 0 if `body` throws Error of `kind`, 1 otherwise.
double expect_error(ErrorKind kind, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind() == kind ? 0.0 : 1.0;
  }
  return 1.0;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (double& x : v) x = std::exp(x);
  v.front() = lo;
  v.back() = hi;
  return v;
}

oracle::QuadratureConfig quad_config(const ValidateOptions& o) {
  oracle::QuadratureConfig qc;
  qc.abs_tol = o.quad_tol;
  return qc;
}

MeasurementStage stage(Observable obs, double sigma, const char* label = "") {
  return {std::move(obs), Pointer(sigma), label};
}

MeasurementStage random_stage(std::size_t d, Rng& rng, double sigma_lo, double sigma_hi) {
  Observable obs = oracle::random_observable(d, rng);
  const double sigma = log_uniform(rng, sigma_lo, sigma_hi);
  return stage(std::move(obs), sigma);
}

struct RandomPair {
  DensityMatrix rho0;
  MeasurementStage first;
  MeasurementStage second;
};

RandomPair random_pair(Rng& rng) {
  const std::size_t d = rng.uniform() < 0.5 ? 2 : 3;
  DensityMatrix rho0 = oracle::random_density(d, rng);
  MeasurementStage a = random_stage(d, rng, 0.2, 3.0);
  MeasurementStage b = random_stage(d, rng, 0.2, 3.0);
  return {std::move(rho0), std::move(a), std::move(b)};
}

MeasurementChain random_chain(Rng& rng) {
  const std::size_t d = rng.uniform() < 0.5 ? 2 : 3;
  const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 3.0);
  std::vector<MeasurementStage> stages;
  for (std::size_t k = 0; k < n; ++k)
    stages.push_back(random_stage(d, rng, 0.2, 3.0));
  return MeasurementChain(oracle::random_density(d, rng), std::move(stages));
}

ChainQuery random_query(const MeasurementChain& chain, Rng& rng) {
  ChainQuery q;
  q.free_stage = std::min(chain.size() - 1, static_cast<std::size_t>(rng.uniform() * chain.size()));
  for (std::size_t k = 0; k < chain.size(); ++k) q.outcomes.push_back(rng.normal());
  return q;
}

oracle::Domain free_domain(const MeasurementStage& s, const oracle::QuadratureConfig& qc) {
  return oracle::padded_domain(s.observable.levels().front(), s.observable.levels().back(), s.sigma(), qc);
}

struct SpinSetup {
  DensityMatrix rho0 = DensityMatrix::from_pure(presets::ket_plus());
  MeasurementStage first;
  MeasurementStage second;
  SpinSetup(double s1, double s2) : first(stage(presets::spin_z(), s1, "Sz")), second(stage(presets::spin_x(), s2, "Sx")) {}
};

MeasurementChain four_stage_chain() {
  std::vector<MeasurementStage> s;
  s.push_back(stage(presets::spin_z(), 0.5, "A"));
  s.push_back(stage(presets::spin_x(), 0.5, "B"));
  s.push_back(stage(presets::spin_x(), 0.5, "C"));
  s.push_back(stage(presets::spin_z(), 0.5, "D"));
  return MeasurementChain(DensityMatrix::from_pure(presets::ket_plus()), std::move(s));
}

ChainQuery four_stage_query() { return {1, {0.3, 0.0, 0.1, -0.4}}; }

double min_eigen_defect(const DensityMatrix& rho) {
  const Eigensystem es = eigh(rho.normalized_matrix());
  return std::max(0.0, -es.values[0]);
}

/// Sets SEQMEAS_THREADS for the lifetime of the guard.
class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) {
    if (const char* prev = std::getenv("SEQMEAS_THREADS")) prev_ = prev;
    ::setenv("SEQMEAS_THREADS", value, 1);
  }
  ~ThreadsEnv() {
    if (prev_) {
      ::setenv("SEQMEAS_THREADS", prev_->c_str(), 1);
    } else {
      ::unsetenv("SEQMEAS_THREADS");
    }
  }

 private:
  std::optional<std::string> prev_;
};

// ---------------------------------------------------------------------------

std::vector<CheckResult> pointer_suite(const ValidateOptions& o) {
  const std::string S = "pointer";
  const auto qc = quad_config(o);
  std::vector<CheckResult> out;

  out.push_back(run_check(S, "amplitude_reference", 1e-15, 4, [] {
    const Pointer p1(1.0), p05(0.5);
    return std::max({rel(amplitude(p1, 1.0, 1.0), 0.631618777746064701),
                     rel(amplitude(p05, 0.3, 0.3), 0.893243841738002331),
                     rel(overlap(p05, 0.5, -0.5), 0.606530659712633424),
                     rel(pair_moment(p05, 0.5, -0.5, 2), 0.151632664928158356)});
  }));

  out.push_back(run_check(S, "quadrature_normal_second_moment", 1e-10, 1, [&] {
    auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
    return std::abs(oracle::quad_moment(pdf, {-12.0, 12.0}, 2, qc) - 1.0);
  }));

  out.push_back(run_check(S, "pair_moment_vs_quadrature", 1e-8, o.trials, [&] {
    Rng rng = Rng(o.seed).split(101);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const Pointer p(log_uniform(rng, 0.05, 5.0));
      const double a = 4.0 * rng.uniform() - 2.0, b = 4.0 * rng.uniform() - 2.0;
      const int n = static_cast<int>(t % 3);
      const double analytic = pair_moment(p, a, b, n);
      // The product peaks at the midpoint; far-apart centres leave almost
      // nothing there, so compare against that peak's own size.
      const double mid = 0.5 * (a + b);
      const double peak = amplitude(p, mid, a) * amplitude(p, mid, b);
      if (!(peak > 1e-250)) continue;
      const double points[] = {std::min(a, b), mid, std::max(a, b)};
      const double q = oracle::quad_moment([&](double x) { return amplitude(p, x, a) * amplitude(p, x, b) / peak; },
                                           oracle::padded_domain(std::min(a, b), std::max(a, b), p.sigma(), qc),
                                           n, qc, points);
      const double scale = std::sqrt(2.0 * std::numbers::pi) * p.sigma() *
                           std::pow(std::max(p.sigma(), std::abs(mid)) + p.sigma(), n);
      worst = std::max(worst, std::abs(q - analytic / peak) / scale);
    }
    return worst;
  }));

  out.push_back(run_check(S, "hermitian_sum_real_moments", 1e-8, o.trials, [&] {
    Rng rng = Rng(o.seed).split(102);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const ComplexMatrix c = oracle::random_hermitian(3, rng);
      const double sigma = log_uniform(rng, 0.1, 3.0);
      double levels[3];
      for (double& l : levels) l = 2.0 * rng.uniform() - 1.0;
      GaussianPairSum s;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s.add(c(i, j), levels[i], levels[j], sigma);
      const double lo = *std::min_element(levels, levels + 3), hi = *std::max_element(levels, levels + 3);
      double mass = 0.0;
      for (const auto& term : s.terms()) mass += std::abs(term.coeff);
      for (int n = 0; n <= 2; ++n) {
        const double q = oracle::quad_moment([&](double x) { return s.evaluate(x); },
                                             oracle::padded_domain(lo, hi, sigma, qc), n, qc);
        const double scale = mass * std::pow(std::max(1.0, sigma), n);
        worst = std::max(worst, std::abs(q - sum_moment(s, n)) / scale);
      }
    }
    return worst;
  }));

  out.push_back(run_check(S, "non_hermitian_sum_rejected", 0.0, 1, [] {
    return expect_error(ErrorKind::NonHermitianSum, [] {
      GaussianPairSum s;
      s.add(Complex(0.0, 1.0), 0.0, 0.0, 1.0);
      (void)sum_moment(s, 0);
    });
  }));

  out.push_back(run_check(S, "invalid_order_rejected", 0.0, 2, [] {
    const Pointer p(1.0);
    return expect_error(ErrorKind::InvalidOrder, [&] { (void)pair_moment(p, 0.0, 0.0, 3); }) +
           expect_error(ErrorKind::InvalidOrder, [&] { (void)pair_moment(p, 0.0, 0.0, -1); });
  }));

  out.push_back(run_check(S, "invalid_sigma_rejected", 0.0, 3, [] {
    return expect_error(ErrorKind::InvalidArgument, [] { Pointer(0.0); }) +
           expect_error(ErrorKind::InvalidArgument, [] { Pointer(-1.0); }) +
           expect_error(ErrorKind::InvalidArgument, [] { Pointer(std::nan("")); });
  }));
  return out;
}

std::vector<CheckResult> kraus_suite(const ValidateOptions& o) {
  const std::string S = "kraus";
  const auto qc = quad_config(o);
  std::vector<CheckResult> out;

  out.push_back(run_check(S, "completeness", 1e-8, 12, [&] {
    Rng rng = Rng(o.seed).split(201);
    const Observable qutrit = oracle::random_observable(3, rng);
    double worst = 0.0;
    for (double sigma : {0.1, 0.5, 2.0, 10.0})
      for (const Observable& obs : {presets::spin_z(), presets::spin_x(), qutrit})
        worst = std::max(worst, completeness_defect(stage(obs, sigma), qc));
    return worst;
  }));

  out.push_back(run_check(S, "truncated_window_defect", 1e-9, 1, [&] {
    return std::abs(completeness_defect(stage(presets::spin_z(), 1.0), {-1.0, 1.0}, qc) -
                    0.375344739994844962);
  }));

  out.push_back(run_check(S, "kraus_reference", 1e-15, 3, [] {
    const ComplexMatrix m = kraus_at(stage(presets::spin_z(), 0.5), 0.0).matrix;
    const ComplexMatrix e = effect_at(stage(presets::spin_x(), 0.5), 0.5).matrix;
    const ComplexVector plus = presets::ket_plus().amplitudes(), minus = presets::ket_minus().amplitudes();
    return std::max({rel(m(0, 0).real(), 0.695659003419266255),
                     rel(plus.dot(e * plus).real(), 0.797884560802865356),
                     rel(minus.dot(e * minus).real(), 0.107981933026376104)});
  }));

  out.push_back(run_check(S, "trace_preservation", 1e-8, o.trials, [&] {
    Rng rng = Rng(o.seed).split(202);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const std::size_t d = 2 + t % 2;
      const DensityMatrix rho = oracle::random_density(d, rng);
      const MeasurementStage s = random_stage(d, rng, 0.1, 10.0);
      worst = std::max(worst, std::abs(oracle::quad_pointer1(rho, s, qc).norm - 1.0));
    }
    return worst;
  }));

  out.push_back(run_check(S, "post_outcome_state_psd", 1e-12, o.trials, [&] {
    Rng rng = Rng(o.seed).split(203);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const std::size_t d = 2 + t % 2;
      const DensityMatrix rho = oracle::random_density(d, rng);
      const MeasurementStage s = random_stage(d, rng, 0.05, 5.0);
      const DensityMatrix post = conditional_state(rho, s, 6.0 * rng.uniform() - 3.0);
      worst = std::max({worst, min_eigen_defect(post), hermitian_defect(post.normalized_matrix()),
                        std::abs(post.normalized_matrix().trace().real() - 1.0)});
    }
    return worst;
  }));
  return out;
}

std::vector<CheckResult> joint_suite(const ValidateOptions& o) {
  const std::string S = "joint";
  const auto qc = quad_config(o);
  std::vector<CheckResult> out;

  out.push_back(run_check(S, "spin_backaction_curve", 1e-10, 50, [] {
    double worst = 0.0;
    for (double s1 : logspace(0.01, 100.0, 50)) {
      const SpinSetup s(s1, 1.0);
      worst = std::max(worst, std::abs(backaction_variance(s.rho0, s.first, s.second.observable) -
                                       spin_reference::var_sx_rho1_closed(s1)));
      worst = std::max(worst, max_abs(post_first_state(s.rho0, s.first).normalized_matrix() -
                                      spin_reference::rho1_closed(s1).normalized_matrix()));
    }
    return worst;
  }));

  out.push_back(run_check(S, "variance_laws_moment_algebra", 1e-10, o.trials, [&] {
    Rng rng = Rng(o.seed).split(301);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const RandomPair p = random_pair(rng);
      auto mixture_variance = [](const DensityMatrix& rho, const MeasurementStage& s) {
        GaussianPairSum sum;
        for (std::size_t l = 0; l < s.observable.level_count(); ++l) {
          const double w = (s.observable.projectors()[l] * rho.normalized_matrix()).trace().real();
          sum.add(Complex(w, 0.0), s.observable.levels()[l], s.observable.levels()[l], s.sigma());
        }
        const PairSumMoments m = sum_moments(sum);
        return m.m2 / m.m0 - (m.m1 / m.m0) * (m.m1 / m.m0);
      };
      const DensityMatrix rho1 = post_first_state(p.rho0, p.first);
      worst = std::max(worst, rel(pointer1_variance(p.rho0, p.first), mixture_variance(p.rho0, p.first)));
      worst = std::max(worst, rel(pointer2_variance(p.rho0, p.first, p.second), mixture_variance(rho1, p.second)));
    }
    return worst;
  }));

  const std::size_t quad_trials = std::min<std::size_t>(o.trials, 100);
  out.push_back(run_check(S, "variance_laws_quadrature", 1e-8, quad_trials, [&] {
    Rng rng = Rng(o.seed).split(302);
    double worst = 0.0;
    for (std::size_t t = 0; t < quad_trials; ++t) {
      const RandomPair p = random_pair(rng);
      worst = std::max(worst, std::abs(oracle::quad_pointer1(p.rho0, p.first, qc).variance -
                                       pointer1_variance(p.rho0, p.first)));
      worst = std::max(worst, std::abs(oracle::quad_pointer2(p.rho0, p.first, p.second, qc).variance -
                                       pointer2_variance(p.rho0, p.first, p.second)));
    }
    return worst;
  }));

  out.push_back(run_check(S, "variance_laws_monte_carlo_z", 3.0, 4, [&] {
    Rng rng = Rng(o.seed).split(303);
    double worst = 0.0;
    for (std::size_t t = 0; t < 4; ++t) {
      const RandomPair p = random_pair(rng);
      oracle::SamplerConfig sc;
      sc.samples = o.mc_samples;
      sc.seed = o.seed + 3030 + t;
      const oracle::OutcomeTable tab = oracle::sample_chain(MeasurementChain(p.rho0, {p.first, p.second}), sc);
      const auto v1 = oracle::jackknife_variance(tab.column(0));
      const auto v2 = oracle::jackknife_variance(tab.column(1));
      worst = std::max(worst, std::abs(v1.variance - pointer1_variance(p.rho0, p.first)) / v1.standard_error);
      worst = std::max(worst, std::abs(v2.variance - pointer2_variance(p.rho0, p.first, p.second)) / v2.standard_error);
    }
    return worst;
  }));

  out.push_back(run_check(S, "post_first_state_invariants", 1e-12, o.trials, [&] {
    Rng rng = Rng(o.seed).split(304);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const RandomPair p = random_pair(rng);
      const DensityMatrix rho1 = post_first_state(p.rho0, p.first);
      worst = std::max({worst, std::abs(rho1.trace() - 1.0), min_eigen_defect(rho1)});
      for (const auto& proj : p.first.observable.projectors()) {
        worst = std::max(worst, std::abs((proj * rho1.normalized_matrix()).trace().real() -
                                         (proj * p.rho0.normalized_matrix()).trace().real()));
      }
    }
    return worst;
  }));

  out.push_back(run_check(S, "no_signaling_monte_carlo_z", 3.0, 2, [&] {
    const DensityMatrix rho0 = DensityMatrix::from_pure(presets::ket_plus());
    const MeasurementStage a = stage(presets::spin_z(), 0.5);
    oracle::SamplerConfig sc;
    sc.samples = o.mc_samples;
    sc.seed = o.seed + 3050;
    const auto t1 = oracle::sample_chain(MeasurementChain(rho0, {a, stage(presets::spin_x(), 0.5)}), sc);
    sc.seed = o.seed + 3051;
    const auto t2 = oracle::sample_chain(MeasurementChain(rho0, {a, stage(presets::spin_y(), 3.0)}), sc);
    const auto v1 = oracle::jackknife_variance(t1.column(0)), v2 = oracle::jackknife_variance(t2.column(0));
    const double n = static_cast<double>(sc.samples);
    const double mean_se = std::sqrt((v1.variance + v2.variance) / n);
    const double var_se = std::hypot(v1.standard_error, v2.standard_error);
    return std::max(std::abs(v1.mean - v2.mean) / mean_se, std::abs(v1.variance - v2.variance) / var_se);
  }));
  return out;
}

std::vector<CheckResult> conditional_suite(const ValidateOptions& o) {
  const std::string S = "conditional";
  const auto qc = quad_config(o);
  std::vector<CheckResult> out;

  out.push_back(run_check(S, "spin_forward_grid", 1e-10, 400, [] {
    double worst = 0.0;
    for (double x1 : linspace(-2.0, 2.0, 20))
      for (double s1 : logspace(0.05, 5.0, 20)) {
        const SpinSetup s(s1, 1.0);
        const double f = forward_stats(s.rho0, s.first, s.second, x1).extracted_system_variance;
        const double g = forward_stats(s.rho0, s.first, s.second, -x1).extracted_system_variance;
        worst = std::max({worst, std::abs(f - spin_reference::var_sx_given_sz_closed(s1, x1)), std::abs(f - g)});
      }
    return worst;
  }));

  out.push_back(run_check(S, "spin_forward_moments", 1e-10, 400, [] {
    double worst = 0.0;
    for (double x1 : linspace(-2.0, 2.0, 20))
      for (double s2 : logspace(0.05, 5.0, 20)) {
        const SpinSetup s(0.5, s2);
        const auto st = forward_stats(s.rho0, s.first, s.second, x1);
        const auto c = spin_reference::cond_moments_closed(0.5, s2, x1);
        worst = std::max({worst, rel(st.mean, c.mean), rel(st.variance, c.variance)});
      }
    return worst;
  }));

  out.push_back(run_check(S, "spin_backward_grid", 1e-9, 2000, [] {
    double worst = 0.0;
    for (double s1 : {0.1, 0.3, 0.5, 1.0, 3.0})
      for (double s2 : logspace(0.1, 3.0, 20))
        for (double x2 : linspace(-1.0, 1.0, 20)) {
          const SpinSetup s(s1, s2);
          const double f = backward_stats(s.rho0, s.first, s.second, x2).extracted_system_variance;
          worst = std::max(worst, std::abs(f - spin_reference::var_sz_given_sx_closed(s1, s2, x2)));
        }
    return worst;
  }));

  out.push_back(run_check(S, "spin_backward_weak_limit", 1e-4, 55, [] {
    double worst = 0.0;
    for (double s2 : {0.1, 0.25, 0.5, 1.0, 2.0})
      for (double x2 : linspace(0.0, 1.0, 11)) {
        const SpinSetup s(1e3, s2);
        const double f = backward_stats(s.rho0, s.first, s.second, x2).extracted_system_variance;
        worst = std::max(worst, std::abs(f - 0.125 * (1.0 + std::exp(-x2 / (s2 * s2)))));
      }
    return worst;
  }));

  out.push_back(run_check(S, "density_normalization", 1e-8, o.trials, [&] {
    Rng rng = Rng(o.seed).split(401);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const RandomPair p = random_pair(rng);
      const double x1 = rng.normal(), x2 = rng.normal();
      const auto fwd = forward_density(p.rho0, p.first, p.second, x1);
      const auto bwd = backward_density(p.rho0, p.first, p.second, x2);
      const double nf = oracle::integrate([&](double x) { return fwd.density.pdf(x); }, free_domain(p.second, qc), qc).value;
      const double nb = oracle::integrate([&](double x) { return bwd.density.pdf(x); }, free_domain(p.first, qc), qc).value;
      worst = std::max({worst, std::abs(nf - 1.0), std::abs(nb - 1.0)});
    }
    return worst;
  }));

  out.push_back(run_check(S, "bayes_consistency", 1e-9, o.trials, [&] {
    Rng rng = Rng(o.seed).split(402);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const RandomPair p = random_pair(rng);
      const double x1 = rng.normal(), x2 = rng.normal();
      const double joint = log_joint(p.rho0, p.first, p.second, x1, x2);
      const double via1 = log_marginal_x1(p.rho0, p.first, x1) +
                          std::log(forward_density(p.rho0, p.first, p.second, x1).density.pdf(x2));
      const double via2 = log_marginal_x2(p.rho0, p.first, p.second, x2) +
                          std::log(backward_density(p.rho0, p.first, p.second, x2).density.pdf(x1));
      worst = std::max({worst, rel(via1, joint), rel(via2, joint)});
    }
    return worst;
  }));

  out.push_back(run_check(S, "conditional_state_psd", 1e-12, o.trials, [&] {
    Rng rng = Rng(o.seed).split(403);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const RandomPair p = random_pair(rng);
      const DensityMatrix r = conditional_state(p.rho0, p.first, 3.0 * rng.normal());
      worst = std::max({worst, min_eigen_defect(r), std::abs(r.normalized_matrix().trace().real() - 1.0)});
    }
    return worst;
  }));

  out.push_back(run_check(S, "extreme_outcome_no_underflow", 1e-12, 1, [] {
    const SpinSetup s(0.01, 0.5);
    return std::abs(forward_stats(s.rho0, s.first, s.second, 1.0).extracted_system_variance - 0.25);
  }));

  out.push_back(run_check(S, "weak_limit_forward", 1e-4, 4, [] {
    const SpinSetup s(1e3, 1e3);
    double worst = 0.0;
    for (double x : {-1.0, 0.0, 0.5, 1.0})
      worst = std::max(worst, forward_stats(s.rho0, s.first, s.second, x).extracted_system_variance);
    return worst;
  }));

  out.push_back(run_check(S, "weak_limit_backward", 1e-3, 4, [] {
    const SpinSetup s(1e3, 1e3);
    double worst = 0.0;
    for (double x : {-1.0, 0.0, 0.5, 1.0})
      worst = std::max(worst, std::abs(backward_stats(s.rho0, s.first, s.second, x).extracted_system_variance - 0.25));
    return worst;
  }));
  return out;
}

std::vector<CheckResult> nseq_suite(const ValidateOptions& o) {
  const std::string S = "nseq";
  const auto qc = quad_config(o);
  std::vector<CheckResult> out;

  out.push_back(run_check(S, "n2_matches_spin_models", 1e-12, 800, [] {
    double worst = 0.0;
    for (double x : linspace(-1.0, 1.0, 20))
      for (double sigma : logspace(0.1, 3.0, 20)) {
        const SpinSetup s(sigma, 0.5);
        const MeasurementChain chain(s.rho0, {s.first, s.second});
        const double fwd = conditional_stats_k(chain, {1, {x, 0.0}}).extracted_variance;
        const double bwd = conditional_stats_k(chain, {0, {0.0, x}}).extracted_variance;
        worst = std::max(worst, rel(fwd, forward_stats(s.rho0, s.first, s.second, x).extracted_system_variance));
        worst = std::max(worst, rel(bwd, backward_stats(s.rho0, s.first, s.second, x).extracted_system_variance));
      }
    return worst;
  }));

  out.push_back(run_check(S, "n2_matches_random_models", 1e-12, o.trials, [&] {
    Rng rng = Rng(o.seed).split(501);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const RandomPair p = random_pair(rng);
      const MeasurementChain chain(p.rho0, {p.first, p.second});
      const double x1 = rng.normal(), x2 = rng.normal();
      const auto cf = conditional_stats_k(chain, {1, {x1, 0.0}});
      const auto cb = conditional_stats_k(chain, {0, {0.0, x2}});
      const auto mf = forward_stats(p.rho0, p.first, p.second, x1);
      const auto mb = backward_stats(p.rho0, p.first, p.second, x2);
      worst = std::max({worst, rel(cf.variance, mf.variance), rel(cb.variance, mb.variance),
                        rel(cf.mean, mf.mean), rel(cb.mean, mb.mean)});
    }
    return worst;
  }));

  out.push_back(run_check(S, "four_stage_chain_quadrature", 1e-8, 1, [&] {
    const auto chain = four_stage_chain();
    return std::abs(conditional_stats_k(chain, four_stage_query()).variance -
                    oracle::quad_conditional(chain, four_stage_query(), qc).variance);
  }));

  out.push_back(run_check(S, "four_stage_chain_monte_carlo_z", 3.0, 1, [&] {
    const auto chain = four_stage_chain();
    oracle::SamplerConfig sc;
    sc.samples = o.mc_samples;
    sc.seed = o.seed + 5000;
    const auto mc = oracle::mc_conditional_variance(chain, four_stage_query(), sc);
    return std::abs(mc.estimate - conditional_stats_k(chain, four_stage_query()).variance) / mc.standard_error;
  }));

  out.push_back(run_check(S, "chain_rule_likelihood", 1e-9, o.trials, [&] {
    Rng rng = Rng(o.seed).split(502);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const MeasurementChain chain = random_chain(rng);
      ChainQuery q = random_query(chain, rng);
      const double xk = rng.normal();
      const OutcomeDensity dens = conditional_density_k(chain, q);
      q.outcomes[q.free_stage] = xk;
      const double full = chain_log_likelihood(chain, q.outcomes);
      worst = std::max(worst, rel(dens.log_likelihood() + std::log(dens.pdf(xk)), full));
    }
    return worst;
  }));

  out.push_back(run_check(S, "random_chain_normalization", 1e-8, o.trials, [&] {
    Rng rng = Rng(o.seed).split(503);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const MeasurementChain chain = random_chain(rng);
      const ChainQuery q = random_query(chain, rng);
      const OutcomeDensity dens = conditional_density_k(chain, q);
      const double n = oracle::integrate([&](double x) { return dens.pdf(x); },
                                         free_domain(chain.stage(q.free_stage), qc), qc).value;
      worst = std::max(worst, std::abs(n - 1.0));
    }
    return worst;
  }));

  out.push_back(run_check(S, "chain_state_trace_and_psd", 1e-12, o.trials, [&] {
    Rng rng = Rng(o.seed).split(504);
    double worst = 0.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const MeasurementChain chain = random_chain(rng);
      const ChainQuery q = random_query(chain, rng);
      const DensityMatrix r = chain_state(chain, q.outcomes);
      worst = std::max({worst, min_eigen_defect(r), std::abs(r.normalized_matrix().trace().real() - 1.0)});
    }
    return worst;
  }));

  out.push_back(run_check(S, "mc_determinism", 0.0, 3, [&] {
    const auto chain = four_stage_chain();
    oracle::SamplerConfig sc;
    sc.samples = 100'000;
    sc.seed = o.seed + 5100;
    oracle::McConditional a, b, c;
    {
      ThreadsEnv env("1");
      a = oracle::mc_conditional_variance(chain, four_stage_query(), sc);
      b = oracle::mc_conditional_variance(chain, four_stage_query(), sc);
    }
    {
      ThreadsEnv env("4");
      c = oracle::mc_conditional_variance(chain, four_stage_query(), sc);
    }
    return (a.estimate == b.estimate && a.estimate == c.estimate && a.mean == c.mean) ? 0.0 : 1.0;
  }));

  out.push_back(run_check(S, "mc_standard_error_scaling", 0.2, 2, [&] {
    const auto chain = four_stage_chain();
    oracle::SamplerConfig sc;
    sc.samples = std::max<std::size_t>(o.mc_samples / 4, 10'000);
    sc.seed = o.seed + 5200;
    const double se1 = oracle::mc_conditional_variance(chain, four_stage_query(), sc).standard_error;
    sc.samples *= 2;
    sc.seed += 1;
    const double se2 = oracle::mc_conditional_variance(chain, four_stage_query(), sc).standard_error;
    return std::abs(se1 / se2 / std::sqrt(2.0) - 1.0);
  }));

  out.push_back(run_check(S, "rejection_stall_reported", 0.0, 1, [] {
    return expect_error(ErrorKind::RejectionStall, [] {
      const MeasurementChain chain(DensityMatrix::from_pure(presets::ket_plus()),
                                   {stage(presets::spin_z(), 300.0), stage(presets::spin_x(), 0.01)});
      oracle::SamplerConfig sc;
      sc.samples = 10;
      (void)oracle::mc_conditional_variance(chain, {0, {0.0, -0.5}}, sc);
    });
  }));

  out.push_back(run_check(S, "invalid_query_rejected", 0.0, 2, [] {
    const auto chain = four_stage_chain();
    return expect_error(ErrorKind::InvalidArgument, [&] { (void)conditional_stats_k(chain, {4, {0, 0, 0, 0}}); }) +
           expect_error(ErrorKind::InvalidArgument, [&] { (void)conditional_stats_k(chain, {1, {0, 0, 0}}); });
  }));
  return out;
}

std::vector<CheckResult> mpur_suite(const ValidateOptions& o) {
  const std::string S = "mpur";
  std::vector<CheckResult> out;

  out.push_back(run_check(S, "spin_baseline", 1e-12, 4, [] {
    const auto r = mpur_check(presets::ket_plus(), presets::spin_z(), presets::spin_x());
    const auto c = spin_reference::mpur_spin_constants();
    return std::max({std::abs(r.lhs_sum - 0.25), std::abs(r.bound - 0.25), std::abs(r.r_a - c.r_a),
                     std::abs(r.r_b - c.r_b)});
  }));

  const std::size_t n = 10 * o.trials;
  out.push_back(run_check(S, "random_pure_states", 1e-10, n, [&] {
    Rng rng = Rng(o.seed).split(601);
    double worst = -1.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t d = 2 + t % 3;
      const PureState psi = oracle::random_pure_state(d, rng);
      const ComplexMatrix a = oracle::random_hermitian(d, rng), b = oracle::random_hermitian(d, rng);
      const auto r = mpur_check(psi, a, b);
      worst = std::max(worst, r.bound - r.lhs_sum);
    }
    return worst;
  }));

  out.push_back(run_check(S, "both_commutator_signs_bounded", 1e-10, o.trials, [&] {
    Rng rng = Rng(o.seed).split(602);
    double worst = -1.0;
    for (std::size_t t = 0; t < o.trials; ++t) {
      const std::size_t d = 2 + t % 3;
      const PureState psi = oracle::random_pure_state(d, rng);
      const ComplexMatrix a = oracle::random_hermitian(d, rng), b = oracle::random_hermitian(d, rng);
      const PureState perp = orthogonal_state(psi, a);
      const double lhs = variance_of(a, psi) + variance_of(b, psi);
      worst = std::max({worst, bound_ra(psi, a, b, perp, CommutatorSign::Plus) - lhs,
                        bound_ra(psi, a, b, perp, CommutatorSign::Minus) - lhs});
    }
    return worst;
  }));

  out.push_back(run_check(S, "invalid_inputs_rejected", 0.0, 2, [] {
    const PureState plus = presets::ket_plus();
    return expect_error(ErrorKind::NotOrthogonal,
                        [&] { (void)bound_ra(plus, presets::pauli_z(), presets::pauli_x(), plus); }) +
           expect_error(ErrorKind::DegenerateDirection, [&] { (void)orthogonal_state(plus, presets::pauli_x()); });
  }));

  out.push_back(run_check(S, "conditional_sum_floor", 1e-6, 1, [] {
    double lowest = 1.0;
    for (double x1 : {-1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0})
      for (double s1 : {0.1, 0.5, 1.0, 5.0, 1e2, 1e3})
        for (double x2 : {-0.5, 0.0, 0.25, 0.5, 1.0, 2.0})
          for (double s2 : {0.1, 0.3, 1.0, 3.0}) {
            const SpinSetup s(s1, s2);
            lowest = std::min(lowest, conditional_mpur_sum(s.rho0, s.first, s.second, x1, x2).sum);
          }
    // Pass when the minimum lies in [0.125 - 1e-6, 0.1251].
    return lowest > 0.1251 ? 1.0 : std::max(0.0, 0.125 - lowest);
  }));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"pointer", "kraus", "joint", "conditional", "nseq", "mpur"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const ValidateOptions& opts) {
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, opts);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  if (suite == "pointer") return pointer_suite(opts);
  if (suite == "kraus") return kraus_suite(opts);
  if (suite == "joint") return joint_suite(opts);
  if (suite == "conditional") return conditional_suite(opts);
  if (suite == "nseq") return nseq_suite(opts);
  if (suite == "mpur") return mpur_suite(opts);
  throw Error(ErrorKind::InvalidArgument, "unknown validation suite '" + suite + "'");
}

void print_check(std::ostream& os, const CheckResult& r) {
  os << "check suite=" << r.suite << " name=" << r.name << " status=" << (r.passed ? "pass" : "fail")
     << " value=" << format_double(r.value) << " tol=" << format_double(r.tolerance) << " trials=" << r.trials;
  if (!r.detail.empty()) {
    std::string d = r.detail;
    std::replace(d.begin(), d.end(), '"', '\'');
    os << " detail=\"" << d << '"';
  }
  os << '\n';
}

}  // namespace seqmeas::cli
