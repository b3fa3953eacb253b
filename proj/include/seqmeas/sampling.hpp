#pragma once

// Monte Carlo realization of measurement chains: full outcome records drawn
// stage by stage, and draws of one outcome from its conditional density.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "seqmeas/chain.hpp"

namespace seqmeas::oracle {

/// Seedable, splittable generator. Child streams are seeded with SplitMix64
/// of (seed, stream index), so a block of work always sees the same numbers
/// regardless of which thread runs it.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  Rng split(std::uint64_t stream) const;

  /// Top 53 bits of one engine output, scaled to [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// N(0, 1) by the Marsaglia polar method; every other call is served from
  /// the cached second deviate.
  double normal();
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

struct SamplerConfig {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Samples per independently seeded block.
  std::size_t block = 8192;

  void validate() const;
};

/// Row-major table of full outcome records, one column per stage.
struct OutcomeTable {
  std::size_t stages = 0;
  std::vector<double> values;

  std::size_t rows() const noexcept { return stages == 0 ? 0 : values.size() / stages; }
  double at(std::size_t row, std::size_t stage) const { return values[row * stages + stage]; }
  std::vector<double> column(std::size_t stage) const;
};

/// Draws each record stage by stage: the stage-k outcome comes from the
/// mixture sum_a <a|rho_{k-1}|a> psi_k^2(x - a) of the normalized current
/// state, which is then updated with the Kraus operator for that outcome.
/// Mixed initial states are sampled as ensembles of their eigenvectors.
OutcomeTable sample_chain(const MeasurementChain& chain, const SamplerConfig& cfg);

struct VarianceEstimate {
  double mean = 0.0;
  double variance = 0.0;
  /// Delete-one jackknife standard error of `variance`.
  double standard_error = 0.0;
};

/// Unbiased sample variance with its jackknife standard error, in O(n).
/// Needs at least two values.
VarianceEstimate jackknife_variance(std::span<const double> xs);

struct McConditional {
  double estimate = 0.0;        // sample variance of x_k
  double standard_error = 0.0;  // jackknife
  double mean = 0.0;
  double acceptance = 1.0;      // accepted / proposed (1 on the direct path)
  bool rejection = false;
};

/// Samples x_k from its conditional density. When k is the last stage the
/// density is a positive Gaussian mixture and is sampled directly; otherwise
/// by rejection from the stage-k marginal mixture with a 1.1x envelope.
/// Throws RejectionStall when the acceptance rate bound falls below 1e-6.
McConditional mc_conditional_variance(const MeasurementChain& chain, const ChainQuery& query,
                                      const SamplerConfig& cfg);

}  // namespace seqmeas::oracle
