#include "seqmeas/conditional_model.hpp"

#include <algorithm>
#include <cmath>

namespace seqmeas {

namespace {

void check_dims(const DensityMatrix& rho0, const MeasurementStage& s1, const MeasurementStage& s2) {
  require_same_dim(s1.dim(), rho0.dim(), "conditional model (stage 1)");
  require_same_dim(s2.dim(), rho0.dim(), "conditional model (stage 2)");
}

/// E(x2) with its largest level weight factored out.
EffectOperator scaled_effect(const MeasurementStage& stage, double x) {
  const auto& obs = stage.observable;
  const std::vector<double> logw = log_level_weights(stage, x);
  const double top = *std::max_element(logw.begin(), logw.end());
  const auto n = static_cast<Eigen::Index>(obs.dim());
  EffectOperator e{ComplexMatrix::Zero(n, n), {x}, 2.0 * top};
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double w = std::exp(2.0 * (logw[i] - top));
    if (w > 0.0) e.matrix += w * obs.projectors()[i];
  }
  return e;
}

}  // namespace

DensityMatrix conditional_state(const DensityMatrix& rho0, const MeasurementStage& stage1, double x1) {
  require_same_dim(stage1.dim(), rho0.dim(), "conditional_state");
  const ScaledKraus k = scaled_kraus_at(stage1, x1);
  const ComplexMatrix shape = k.matrix * rho0.normalized_matrix() * k.matrix.adjoint();
  return DensityMatrix::from_scaled(shape, 2.0 * k.log_scale + rho0.log_trace());
}

ConditionalDensity forward_density(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                   const MeasurementStage& stage2, double x1) {
  check_dims(rho0, stage1, stage2);
  const DensityMatrix rho1 = conditional_state(rho0, stage1, x1);
  const auto& b = stage2.observable;
  GaussianPairSum numerator;
  for (std::size_t i = 0; i < b.level_count(); ++i) {
    const double weight = (b.projectors()[i] * rho1.normalized_matrix()).trace().real();
    numerator.add(Complex(std::max(weight, 0.0), 0.0), b.levels()[i], b.levels()[i], stage2.sigma());
  }
  return {Direction::Forward, x1, OutcomeDensity(std::move(numerator), 0.0, stage2.sigma())};
}

ConditionalStats forward_stats(const DensityMatrix& rho0, const MeasurementStage& stage1,
                               const MeasurementStage& stage2, double x1) {
  return forward_density(rho0, stage1, stage2, x1).density.stats();
}

ConditionalDensity backward_density(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                    const MeasurementStage& stage2, double x2) {
  check_dims(rho0, stage1, stage2);
  const EffectOperator e = scaled_effect(stage2, x2);
  const auto& a = stage1.observable;
  const ComplexMatrix& rho = rho0.normalized_matrix();
  GaussianPairSum numerator;
  for (std::size_t i = 0; i < a.level_count(); ++i) {
    const ComplexMatrix left = a.projectors()[i] * rho;
    for (std::size_t j = 0; j < a.level_count(); ++j) {
      const Complex c = (left * a.projectors()[j] * e.matrix).trace();
      numerator.add(c, a.levels()[i], a.levels()[j], stage1.sigma());
    }
  }
  return {Direction::Backward, x2,
          OutcomeDensity(std::move(numerator), e.log_scale + rho0.log_trace(), stage1.sigma())};
}

ConditionalStats backward_stats(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                const MeasurementStage& stage2, double x2) {
  return backward_density(rho0, stage1, stage2, x2).density.stats();
}

double log_marginal_x1(const DensityMatrix& rho0, const MeasurementStage& stage1, double x1) {
  return conditional_state(rho0, stage1, x1).log_trace();
}

double log_marginal_x2(const DensityMatrix& rho0, const MeasurementStage& stage1,
                       const MeasurementStage& stage2, double x2) {
  return backward_density(rho0, stage1, stage2, x2).density.log_likelihood();
}

double log_joint(const DensityMatrix& rho0, const MeasurementStage& stage1,
                 const MeasurementStage& stage2, double x1, double x2) {
  check_dims(rho0, stage1, stage2);
  const DensityMatrix rho1 = conditional_state(rho0, stage1, x1);
  const EffectOperator e = scaled_effect(stage2, x2);
  const double tr = (rho1.normalized_matrix() * e.matrix).trace().real();
  if (!(tr > 0.0)) throw Error(ErrorKind::ZeroLikelihood, "joint likelihood vanished");
  return rho1.log_trace() + e.log_scale + std::log(tr);
}

}  // namespace seqmeas
