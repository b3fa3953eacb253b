#include "seqmeas/joint_model.hpp"

namespace seqmeas {

DensityMatrix post_first_state(const DensityMatrix& rho0, const MeasurementStage& stage1) {
  const auto& obs = stage1.observable;
  require_same_dim(obs.dim(), rho0.dim(), "post_first_state");
  const ComplexMatrix& v = obs.eigenvectors();
  ComplexMatrix in_eigenbasis = v.adjoint() * rho0.normalized_matrix() * v;
  const auto n = in_eigenbasis.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ai = obs.levels()[obs.level_of(static_cast<std::size_t>(i))];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double aj = obs.levels()[obs.level_of(static_cast<std::size_t>(j))];
      in_eigenbasis(i, j) *= overlap(stage1.pointer, ai, aj);
    }
  }
  return DensityMatrix::from_scaled(v * in_eigenbasis * v.adjoint(), 0.0);
}

double pointer1_mean(const DensityMatrix& rho0, const MeasurementStage& stage1) {
  return expectation(stage1.observable.matrix(), rho0);
}

double pointer1_variance(const DensityMatrix& rho0, const MeasurementStage& stage1) {
  return stage1.pointer.variance() + variance_of(stage1.observable, rho0);
}

double backaction_variance(const DensityMatrix& rho0, const MeasurementStage& stage1,
                           const Observable& b) {
  require_same_dim(b.dim(), rho0.dim(), "backaction_variance");
  return variance_of(b, post_first_state(rho0, stage1));
}

double pointer2_variance(const DensityMatrix& rho0, const MeasurementStage& stage1,
                         const MeasurementStage& stage2) {
  return stage2.pointer.variance() + backaction_variance(rho0, stage1, stage2.observable);
}

JointModelResult joint_model(const DensityMatrix& rho0, const MeasurementStage& stage1,
                             const MeasurementStage& stage2) {
  require_same_dim(stage1.dim(), stage2.dim(), "joint_model");
  DensityMatrix rho1 = post_first_state(rho0, stage1);
  JointModelResult r{rho1};
  r.mean_x1 = pointer1_mean(rho0, stage1);
  r.var_A_rho0 = variance_of(stage1.observable, rho0);
  r.var_x1 = stage1.pointer.variance() + r.var_A_rho0;
  r.mean_x2 = expectation(stage2.observable.matrix(), rho1);
  r.var_B_rho1 = variance_of(stage2.observable, rho1);
  r.var_x2 = stage2.pointer.variance() + r.var_B_rho1;
  r.var_B_rho0 = variance_of(stage2.observable, rho0);
  return r;
}

}  // namespace seqmeas
