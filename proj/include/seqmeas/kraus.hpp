#pragma once

#include <string>
#include <vector>

#include "seqmeas/gaussian_pointer.hpp"
#include "seqmeas/quadrature.hpp"
#include "seqmeas/quantum_core.hpp"

namespace seqmeas {

/// One probe coupling: the measured observable and the probe width.
struct MeasurementStage {
  Observable observable;
  Pointer pointer;
  std::string label;

  std::size_t dim() const noexcept { return observable.dim(); }
  double sigma() const noexcept { return pointer.sigma(); }
};

/// M_x = sum_i psi(x - a_i) P_i, dense in the computational basis.
struct KrausOperator {
  ComplexMatrix matrix;
  double outcome = 0.0;
};

/// Product of Kraus operators M^dagger M (or a longer sandwich), representing
/// exp(log_scale) * matrix.
struct EffectOperator {
  ComplexMatrix matrix;
  std::vector<double> outcomes;
  double log_scale = 0.0;

  ComplexMatrix value() const;
};

KrausOperator kraus_at(const MeasurementStage& stage, double x);

/// sum_i |psi(x - a_i)|^2 P_i
EffectOperator effect_at(const MeasurementStage& stage, double x);

/// Kraus operator with its largest Gaussian weight factored out:
/// M_x = exp(log_scale) * matrix, and the largest weight in `matrix` is 1.
struct ScaledKraus {
  ComplexMatrix matrix;
  double log_scale = 0.0;
};
ScaledKraus scaled_kraus_at(const MeasurementStage& stage, double x);

/// Per-level log weights log psi(x - a_i), in level order.
std::vector<double> log_level_weights(const MeasurementStage& stage, double x);

/// max |integral of M_x^dagger M_x dx - I| over the stage's padded window.
double completeness_defect(const MeasurementStage& stage, const oracle::QuadratureConfig& cfg);
/// Same, over an explicit window (used to show truncation sensitivity).
double completeness_defect(const MeasurementStage& stage, oracle::Domain domain,
                           const oracle::QuadratureConfig& cfg);

}  // namespace seqmeas
