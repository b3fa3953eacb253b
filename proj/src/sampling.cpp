#include "seqmeas/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "seqmeas/parallel.hpp"

namespace seqmeas::oracle {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632BE59BD9B4E019ull)));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

void SamplerConfig::validate() const {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
  if (block < 1) throw Error(ErrorKind::InvalidArgument, "sampler block size must be >= 1");
}

std::vector<double> OutcomeTable::column(std::size_t stage) const {
  if (stage >= stages) throw Error(ErrorKind::InvalidArgument, "outcome column out of range");
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, stage);
  return out;
}

namespace {

using Flat = std::vector<Complex>;

Flat flatten(const ComplexMatrix& m) {
  Flat f(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) f[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return f;
}

std::size_t pick(std::span<const double> cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

/// Everything the inner sampling loop needs, in each stage's eigenbasis.
struct ChainPlan {
  struct Stage {
    Flat transfer;  // previous stage's eigenbasis (or computational) -> this one
    std::vector<std::size_t> level_of;
    std::vector<double> levels;
    double sigma;
    double inv_4s2;
  };
  std::size_t dim;
  std::vector<Stage> stages;
  std::vector<Flat> components;  // eigenvectors of rho0 in stage 0's basis
  std::vector<double> cumulative;
};

ChainPlan make_plan(const MeasurementChain& chain) {
  ChainPlan plan;
  plan.dim = chain.dim();
  ComplexMatrix prev = ComplexMatrix::Identity(static_cast<Eigen::Index>(plan.dim),
                                               static_cast<Eigen::Index>(plan.dim));
  for (const auto& s : chain.stages()) {
    const auto& obs = s.observable;
    ChainPlan::Stage st;
    st.transfer = flatten(obs.eigenvectors().adjoint() * prev);
    for (std::size_t i = 0; i < obs.dim(); ++i) st.level_of.push_back(obs.level_of(i));
    st.levels = obs.levels();
    st.sigma = s.sigma();
    st.inv_4s2 = 1.0 / (4.0 * st.sigma * st.sigma);
    plan.stages.push_back(std::move(st));
    prev = obs.eigenvectors();
  }
  const Eigensystem es = eigh(chain.initial().normalized_matrix());
  const ComplexMatrix first = chain.stage(0).observable.eigenvectors().adjoint();
  double acc = 0.0;
  for (Eigen::Index m = 0; m < es.values.size(); ++m) {
    if (!(es.values[m] > 1e-15)) continue;
    const ComplexVector v = first * es.vectors.col(m);
    plan.components.emplace_back(v.data(), v.data() + v.size());
    acc += es.values[m];
    plan.cumulative.push_back(acc);
  }
  return plan;
}

/// Fills one record per row of `out` (stride = number of stages).
void sample_block(const ChainPlan& plan, Rng& rng, std::size_t count, double* out) {
  const std::size_t d = plan.dim;
  const std::size_t n_stages = plan.stages.size();
  const bool mixed = plan.components.size() > 1;
  // Complex products are spelled out: std::complex multiplication goes
  // through the NaN-safe library routine, which dominates this loop.
  std::vector<double> re(d), im(d), tre(d), tim(d), level_mass(d), level_w(d);
  for (std::size_t r = 0; r < count; ++r) {
    const Flat& start = plan.components[mixed ? pick(plan.cumulative, rng.uniform()) : 0];
    for (std::size_t i = 0; i < d; ++i) {
      re[i] = start[i].real();
      im[i] = start[i].imag();
    }
    for (std::size_t k = 0; k < n_stages; ++k) {
      const auto& st = plan.stages[k];
      if (k > 0) {
        for (std::size_t row = 0; row < d; ++row) {
          double sr = 0.0, si = 0.0;
          const Complex* t = st.transfer.data() + row * d;
          for (std::size_t c = 0; c < d; ++c) {
            sr += t[c].real() * re[c] - t[c].imag() * im[c];
            si += t[c].real() * im[c] + t[c].imag() * re[c];
          }
          tre[row] = sr;
          tim[row] = si;
        }
        std::swap(re, tre);
        std::swap(im, tim);
      }
      const std::size_t nl = st.levels.size();
      for (std::size_t l = 0; l < nl; ++l) level_mass[l] = 0.0;
      double total = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double m = re[i] * re[i] + im[i] * im[i];
        level_mass[st.level_of[i]] += m;
        total += m;
      }
      double u = rng.uniform() * total;
      std::size_t chosen = 0;
      while (chosen + 1 < nl && (u -= level_mass[chosen]) >= 0.0) ++chosen;
      if (level_mass[chosen] <= 0.0) {
        // Roundoff pushed u past the last populated level.
        while (chosen > 0 && level_mass[chosen] <= 0.0) --chosen;
      }
      const double x = st.levels[chosen] + st.sigma * rng.normal();
      out[r * n_stages + k] = x;
      if (k + 1 == n_stages) break;
      // Kraus update with the largest populated weight factored out. The
      // state stays unnormalized unless it drifts toward underflow.
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < nl; ++l) {
        const double dx = x - st.levels[l];
        level_w[l] = -dx * dx * st.inv_4s2;
        if (level_mass[l] > 0.0) top = std::max(top, level_w[l]);
      }
      for (std::size_t l = 0; l < nl; ++l) level_w[l] = level_w[l] == top ? 1.0 : std::exp(level_w[l] - top);
      double kept = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double w = level_w[st.level_of[i]];
        re[i] *= w;
        im[i] *= w;
        kept += re[i] * re[i] + im[i] * im[i];
      }
      if (kept < 1e-150) {
        const double inv = 1.0 / std::sqrt(kept);
        for (std::size_t i = 0; i < d; ++i) {
          re[i] *= inv;
          im[i] *= inv;
        }
      }
    }
  }
}

std::size_t block_count(const SamplerConfig& cfg) { return (cfg.samples + cfg.block - 1) / cfg.block; }

std::size_t block_size(const SamplerConfig& cfg, std::size_t b) {
  return std::min(cfg.block, cfg.samples - b * cfg.block);
}

double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

}  // namespace

OutcomeTable sample_chain(const MeasurementChain& chain, const SamplerConfig& cfg) {
  cfg.validate();
  const ChainPlan plan = make_plan(chain);
  OutcomeTable table;
  table.stages = chain.size();
  table.values.assign(cfg.samples * table.stages, 0.0);
  const Rng root(cfg.seed);
  parallel_for(block_count(cfg), [&](std::size_t b) {
    Rng rng = root.split(b);
    sample_block(plan, rng, block_size(cfg, b), table.values.data() + b * cfg.block * table.stages);
  });
  return table;
}

VarianceEstimate jackknife_variance(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "jackknife needs at least three values");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double s1 = 0.0, s2 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    s1 += d;
    s2 += d * d;
  }
  const double nd = static_cast<double>(n);
  VarianceEstimate out;
  out.mean = mean + s1 / nd;
  out.variance = (s2 - s1 * s1 / nd) / (nd - 1.0);
  // Leave-one-out variances, then their spread.
  const double m = nd - 1.0;
  double vbar = 0.0;
  auto loo = [&](double x) {
    const double d = x - mean;
    const double a = s1 - d;
    const double b = s2 - d * d;
    return (b - a * a / m) / (m - 1.0);
  };
  for (double x : xs) vbar += loo(x);
  vbar /= nd;
  double ss = 0.0;
  for (double x : xs) {
    const double dv = loo(x) - vbar;
    ss += dv * dv;
  }
  out.standard_error = std::sqrt((nd - 1.0) / nd * ss);
  return out;
}

McConditional mc_conditional_variance(const MeasurementChain& chain, const ChainQuery& query,
                                      const SamplerConfig& cfg) {
  cfg.validate();
  const OutcomeDensity density = conditional_density_k(chain, query);
  const MeasurementStage& stage = chain.stage(query.free_stage);
  const auto& obs = stage.observable;
  const double sigma = stage.sigma();
  const std::size_t nl = obs.level_count();
  auto level_index = [&](double center) {
    const auto it = std::find(obs.levels().begin(), obs.levels().end(), center);
    return static_cast<std::size_t>(it - obs.levels().begin());
  };

  McConditional result;
  std::vector<double> samples(cfg.samples);
  const Rng root(cfg.seed);

  if (query.free_stage + 1 == chain.size()) {
    // Positive mixture: pick a component, then draw its Gaussian.
    std::vector<double> centers, cumulative;
    double acc = 0.0;
    for (const auto& t : density.numerator().terms()) {
      const double w = t.coeff.real() * overlap(stage.pointer, t.center_a, t.center_b);
      if (!(w > 0.0)) continue;
      centers.push_back(0.5 * (t.center_a + t.center_b));
      cumulative.push_back(acc += w);
    }
    parallel_for(block_count(cfg), [&](std::size_t b) {
      Rng rng = root.split(b);
      const std::size_t n = block_size(cfg, b);
      double* out = samples.data() + b * cfg.block;
      for (std::size_t r = 0; r < n; ++r) out[r] = centers[pick(cumulative, rng.uniform())] + sigma * rng.normal();
    });
  } else {
    result.rejection = true;
    const DensityMatrix before =
        chain_state(chain, std::span<const double>(query.outcomes).first(query.free_stage));
    std::vector<double> w(nl), bound(nl, 0.0), cumulative(nl);
    double acc = 0.0;
    for (std::size_t l = 0; l < nl; ++l) {
      w[l] = std::max(0.0, (obs.projectors()[l] * before.normalized_matrix()).trace().real());
      cumulative[l] = (acc += w[l]);
    }
    for (double& v : w) v /= acc;
    // |c psi_a psi_b| <= |c| (psi_a^2 + psi_b^2) / 2
    for (const auto& t : density.numerator().terms()) {
      bound[level_index(t.center_a)] += 0.5 * std::abs(t.coeff);
      bound[level_index(t.center_b)] += 0.5 * std::abs(t.coeff);
    }
    double envelope = 0.0;
    for (std::size_t l = 0; l < nl; ++l) {
      if (bound[l] <= 0.0) continue;
      envelope = w[l] > 0.0 ? std::max(envelope, bound[l] / (density.normalization() * w[l]))
                            : std::numeric_limits<double>::infinity();
    }
    envelope *= 1.1;
    if (!(1.0 / envelope >= 1e-6)) {
      std::ostringstream os;
      os << "rejection acceptance bound " << 1.0 / envelope << " is below 1e-6";
      throw Error(ErrorKind::RejectionStall, os.str());
    }
    std::vector<std::size_t> proposed(block_count(cfg), 0);
    parallel_for(block_count(cfg), [&](std::size_t b) {
      Rng rng = root.split(b);
      const std::size_t n = block_size(cfg, b);
      double* out = samples.data() + b * cfg.block;
      std::size_t tries = 0;
      for (std::size_t r = 0; r < n;) {
        ++tries;
        const std::size_t l = pick(cumulative, rng.uniform());
        const double x = obs.levels()[l] + sigma * rng.normal();
        double q = 0.0;
        for (std::size_t j = 0; j < nl; ++j)
          if (w[j] > 0.0) q += w[j] * normal_pdf(x, obs.levels()[j], sigma);
        if (rng.uniform() * envelope * q <= density.pdf(x)) out[r++] = x;
      }
      proposed[b] = tries;
    });
    std::size_t total = 0;
    for (std::size_t t : proposed) total += t;
    result.acceptance = static_cast<double>(cfg.samples) / static_cast<double>(total);
  }

  const VarianceEstimate v = jackknife_variance(samples);
  result.estimate = v.variance;
  result.standard_error = v.standard_error;
  result.mean = v.mean;
  return result;
}

}  // namespace seqmeas::oracle
