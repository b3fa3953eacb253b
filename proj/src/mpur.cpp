#include "seqmeas/mpur.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seqmeas/conditional_model.hpp"

namespace seqmeas {

namespace {

constexpr double kVarianceFloor = 1e-12;
constexpr double kOrthogonalityTol = 1e-10;

void check_ops(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(static_cast<std::size_t>(a.rows()), psi.dim(), "mpur (A)");
  require_same_dim(static_cast<std::size_t>(b.rows()), psi.dim(), "mpur (B)");
}

/// Any unit vector orthogonal to psi: the basis vector least aligned with psi,
/// projected off psi.
PureState any_orthogonal(const PureState& psi) {
  const auto n = static_cast<Eigen::Index>(psi.dim());
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(psi.amplitudes()[i]) < std::abs(psi.amplitudes()[best])) best = i;
  ComplexVector e = ComplexVector::Unit(n, best);
  e -= psi.amplitudes() * psi.amplitudes().dot(e);
  return PureState::normalized(e);
}

}  // namespace

PureState orthogonal_state(const PureState& psi, const ComplexMatrix& a) {
  require_same_dim(static_cast<std::size_t>(a.rows()), psi.dim(), "orthogonal_state");
  const double var = variance_of(a, psi);
  if (var <= kVarianceFloor) {
    throw Error(ErrorKind::DegenerateDirection, "state is (numerically) an eigenstate of the operator");
  }
  const double mean = expectation(a, psi);
  const ComplexVector shifted = a * psi.amplitudes() - mean * psi.amplitudes();
  return PureState::normalized(shifted / std::sqrt(var));
}

PureState orthogonal_state(const PureState& psi, const Observable& a) {
  return orthogonal_state(psi, a.matrix());
}

double commutator_term(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b) {
  check_ops(psi, a, b);
  // i(<AB> - <BA>) = i(<AB> - conj<AB>) = -2 Im<AB>
  const Complex ab = psi.amplitudes().dot(a * (b * psi.amplitudes()));
  return -2.0 * ab.imag();
}

CommutatorSign resolve_sign(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b,
                            CommutatorSign sign) {
  if (sign != CommutatorSign::Auto) return sign;
  return commutator_term(psi, a, b) >= 0.0 ? CommutatorSign::Plus : CommutatorSign::Minus;
}

double bound_ra(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b,
                const PureState& psi_perp, CommutatorSign sign) {
  check_ops(psi, a, b);
  require_same_dim(psi_perp.dim(), psi.dim(), "bound_ra (psi_perp)");
  const double inner = std::abs(psi.amplitudes().dot(psi_perp.amplitudes()));
  if (inner > kOrthogonalityTol) {
    std::ostringstream os;
    os << "|<psi|psi_perp>| = " << inner;
    throw Error(ErrorKind::NotOrthogonal, os.str());
  }
  const double s = resolve_sign(psi, a, b, sign) == CommutatorSign::Plus ? 1.0 : -1.0;
  const ComplexMatrix combo = a + Complex(0.0, s) * b;
  const Complex amp = psi.amplitudes().dot(combo * psi_perp.amplitudes());
  return s * commutator_term(psi, a, b) + std::norm(amp);
}

double bound_rb(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b) {
  check_ops(psi, a, b);
  const ComplexMatrix sum = a + b;
  if (variance_of(sum, psi) <= kVarianceFloor) return 0.0;
  const PureState perp = orthogonal_state(psi, sum);
  const Complex amp = perp.amplitudes().dot(sum * psi.amplitudes());
  return 0.5 * std::norm(amp);
}

MpurReport mpur_check(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b) {
  check_ops(psi, a, b);
  MpurReport r;
  r.lhs_sum = variance_of(a, psi) + variance_of(b, psi);
  r.commutator_sign = resolve_sign(psi, a, b, CommutatorSign::Auto);
  if (psi.dim() > 1) {
    const PureState perp = variance_of(a, psi) > kVarianceFloor   ? orthogonal_state(psi, a)
                           : variance_of(b, psi) > kVarianceFloor ? orthogonal_state(psi, b)
                                                                  : any_orthogonal(psi);
    r.r_a = bound_ra(psi, a, b, perp, r.commutator_sign);
  }
  r.r_b = bound_rb(psi, a, b);
  r.bound = std::max(r.r_a, r.r_b);
  r.satisfied = r.lhs_sum >= r.bound - 1e-10;
  return r;
}

MpurReport mpur_check(const PureState& psi, const Observable& a, const Observable& b) {
  return mpur_check(psi, a.matrix(), b.matrix());
}

PureState purify_rank_one(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.normalized_matrix();
  const double purity = (m * m).trace().real();
  if (purity < 1.0 - 1e-10) {
    std::ostringstream os;
    os << "initial state must be pure (purity " << purity << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  const Eigensystem es = eigh(m);
  return PureState::normalized(es.vectors.col(es.vectors.cols() - 1));
}

ConditionalMpurSum conditional_mpur_sum(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                        const MeasurementStage& stage2, double x1, double x2) {
  ConditionalMpurSum out;
  out.backward_extracted = backward_stats(rho0, stage1, stage2, x2).extracted_system_variance;
  out.forward_extracted = forward_stats(rho0, stage1, stage2, x1).extracted_system_variance;
  out.sum = out.backward_extracted + out.forward_extracted;
  const PureState psi = purify_rank_one(rho0);
  out.classical_bound = mpur_check(psi, stage1.observable, stage2.observable).bound;
  out.below = out.sum < out.classical_bound;
  return out;
}

}  // namespace seqmeas
