#pragma once

// Quadrature over outcome densities built directly from Kraus matrices. This
// is deliberately a separate code path from the Gaussian-pair moment algebra.

#include "seqmeas/chain.hpp"
#include "seqmeas/quadrature.hpp"

namespace seqmeas::oracle {

struct QuadMoments {
  double norm = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Normalization, mean and variance of a non-negative density on `domain`.
QuadMoments quad_moments(const std::function<double(double)>& f, Domain domain,
                         const QuadratureConfig& cfg, std::span<const double> breakpoints = {});

/// Integral of M_x rho M_x^dagger over the outcome, entry by entry.
ComplexMatrix quad_averaged_state(const ComplexMatrix& rho, const MeasurementStage& stage,
                                  const QuadratureConfig& cfg);

/// Outcome statistics of the first probe, integrand Tr[M_x rho0 M_x^dagger].
QuadMoments quad_pointer1(const DensityMatrix& rho0, const MeasurementStage& stage1,
                          const QuadratureConfig& cfg);

/// Outcome statistics of the second probe after the first outcome is
/// integrated out.
QuadMoments quad_pointer2(const DensityMatrix& rho0, const MeasurementStage& stage1,
                          const MeasurementStage& stage2, const QuadratureConfig& cfg);

/// Conditional statistics of x_k, integrand Tr[M_x rho_{k-1} M_x^dagger E].
QuadMoments quad_conditional(const MeasurementChain& chain, const ChainQuery& query,
                             const QuadratureConfig& cfg);

}  // namespace seqmeas::oracle
