#pragma once

// Joint measurement model: both probes couple to the system before either is
// read. Pointer statistics follow from closed-form Gaussian moments; the joint
// probe state itself is never materialized.

#include "seqmeas/kraus.hpp"

namespace seqmeas {

struct JointModelResult {
  DensityMatrix rho1;
  double mean_x1 = 0.0;
  double var_x1 = 0.0;
  double mean_x2 = 0.0;
  double var_x2 = 0.0;
  double var_A_rho0 = 0.0;
  double var_B_rho1 = 0.0;
  double var_B_rho0 = 0.0;
};

/// System state after coupling to the first probe with the outcome discarded:
/// coherences between levels a_i, a_j are damped by overlap(a_i, a_j).
DensityMatrix post_first_state(const DensityMatrix& rho0, const MeasurementStage& stage1);

/// <x1> = Tr[A rho0]
double pointer1_mean(const DensityMatrix& rho0, const MeasurementStage& stage1);

/// sigma1^2 + Var(A)_rho0. Never reads the second stage.
double pointer1_variance(const DensityMatrix& rho0, const MeasurementStage& stage1);

/// Var(B) on the post-first-measurement state.
double backaction_variance(const DensityMatrix& rho0, const MeasurementStage& stage1,
                           const Observable& b);

/// sigma2^2 + Var(B)_rho1
double pointer2_variance(const DensityMatrix& rho0, const MeasurementStage& stage1,
                         const MeasurementStage& stage2);

JointModelResult joint_model(const DensityMatrix& rho0, const MeasurementStage& stage1,
                             const MeasurementStage& stage2);

}  // namespace seqmeas
