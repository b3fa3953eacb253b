#pragma once

// N-stage sequential measurement chains. Stage k applies
//   rho_k = Omega_k rho_{k-1} Omega_k^dagger,  Omega_k = sum_a psi_k(x_k - a) P_a
// and the density of one outcome given all the others is
//   p(x_k | rest) = Tr[rho_k E] / integral over x_k,
//   E = Omega_{k+1}^dagger ... Omega_N^dagger Omega_N ... Omega_{k+1}.
//
// Stage indices in this API are zero-based.

#include <span>
#include <vector>

#include "seqmeas/kraus.hpp"
#include "seqmeas/outcome_density.hpp"

namespace seqmeas {

class MeasurementChain {
 public:
  /// Throws InvalidArgument for an empty chain, DimensionMismatch if any stage
  /// or the initial state disagree on dimension.
  MeasurementChain(DensityMatrix initial, std::vector<MeasurementStage> stages);

  std::size_t size() const noexcept { return stages_.size(); }
  std::size_t dim() const noexcept { return initial_.dim(); }
  const DensityMatrix& initial() const noexcept { return initial_; }
  const std::vector<MeasurementStage>& stages() const noexcept { return stages_; }
  const MeasurementStage& stage(std::size_t k) const { return stages_.at(k); }

 private:
  DensityMatrix initial_;
  std::vector<MeasurementStage> stages_;
};

/// One free stage; every other stage has a recorded outcome.
/// `outcomes` has one entry per stage and the free stage's entry is ignored.
struct ChainQuery {
  std::size_t free_stage = 0;
  std::vector<double> outcomes;

  /// Throws InvalidArgument on a bad index, wrong length or non-finite fixed
  /// outcome.
  void validate(const MeasurementChain& chain) const;
};

struct ChainResult {
  OutcomeDensity density;
  double mean = 0.0;
  double variance = 0.0;
  double extracted_variance = 0.0;
  bool clamped = false;
  bool sub_probe_width = false;
};

/// State after the first outcomes.size() stages, unnormalized; its trace is
/// the joint likelihood of those outcomes.
DensityMatrix chain_state(const MeasurementChain& chain, std::span<const double> outcomes);

/// Effect of stages first .. N-1 for the given outcomes (one per stage).
/// first == N yields the identity.
EffectOperator effect_chain(const MeasurementChain& chain, std::size_t first,
                            std::span<const double> outcomes);

OutcomeDensity conditional_density_k(const MeasurementChain& chain, const ChainQuery& query);
ChainResult conditional_stats_k(const MeasurementChain& chain, const ChainQuery& query);

/// log p(x_1, ..., x_N) for a full outcome record.
double chain_log_likelihood(const MeasurementChain& chain, std::span<const double> outcomes);

}  // namespace seqmeas
