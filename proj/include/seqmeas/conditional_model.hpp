#pragma once

// Conditional measurement model: each probe is read right after it couples,
// and statistics of one outcome are conditioned on the recorded value of the
// other. Forward = x2 given x1 (causal); backward = x1 given x2 (noncausal).

#include "seqmeas/kraus.hpp"
#include "seqmeas/outcome_density.hpp"

namespace seqmeas {

enum class Direction { Forward, Backward };

using ConditionalStats = OutcomeStats;

struct ConditionalDensity {
  Direction direction;
  double conditioning_value;
  OutcomeDensity density;
};

/// M_{x1} rho0 M_{x1}^dagger, unnormalized; its trace is the likelihood p(x1).
DensityMatrix conditional_state(const DensityMatrix& rho0, const MeasurementStage& stage1, double x1);

/// p(x2 | x1): a Gaussian mixture over the levels b of the second observable
/// with weights <b| rho1(x1) |b> of the normalized conditional state.
ConditionalDensity forward_density(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                   const MeasurementStage& stage2, double x1);
ConditionalStats forward_stats(const DensityMatrix& rho0, const MeasurementStage& stage1,
                               const MeasurementStage& stage2, double x1);

/// p(x1 | x2) proportional to Tr[rho1(x1) E(x2)], expanded over pairs of levels
/// (a, a') of the first observable with coefficients Tr[P_a rho0 P_a' E(x2)].
ConditionalDensity backward_density(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                    const MeasurementStage& stage2, double x2);
ConditionalStats backward_stats(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                const MeasurementStage& stage2, double x2);

/// log p(x1)
double log_marginal_x1(const DensityMatrix& rho0, const MeasurementStage& stage1, double x1);
/// log p(x2), marginalized over x1.
double log_marginal_x2(const DensityMatrix& rho0, const MeasurementStage& stage1,
                       const MeasurementStage& stage2, double x2);
/// log p(x1, x2) = log Tr[M_{x1} rho0 M_{x1}^dagger E(x2)]
double log_joint(const DensityMatrix& rho0, const MeasurementStage& stage1,
                 const MeasurementStage& stage2, double x1, double x2);

}  // namespace seqmeas
