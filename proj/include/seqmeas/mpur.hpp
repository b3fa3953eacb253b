#pragma once

// Maccone-Pati sum-of-variances bound
//   Var(A) + Var(B) >= max(R_a, R_b)
//   R_a = +-i<[A,B]> + |<psi| A +- iB |psi_perp>|^2
//   R_b = 1/2 |<psi_perp(A+B)| A+B |psi>|^2
// and its comparison against conditional (post-selected) variances.

#include "seqmeas/kraus.hpp"

namespace seqmeas {

enum class CommutatorSign { Plus, Minus, Auto };

struct MpurReport {
  double lhs_sum = 0.0;
  double r_a = 0.0;
  double r_b = 0.0;
  double bound = 0.0;
  bool satisfied = false;
  /// Sign actually used in R_a (never Auto).
  CommutatorSign commutator_sign = CommutatorSign::Plus;
};

/// (A - <A>)|psi> / Delta(A). Throws DegenerateDirection when Var(A) <= 1e-12.
PureState orthogonal_state(const PureState& psi, const ComplexMatrix& a);
PureState orthogonal_state(const PureState& psi, const Observable& a);

/// i<psi|[A,B]|psi>, which is real for Hermitian A, B.
double commutator_term(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b);

/// Resolves Auto to the sign that makes +-i<[A,B]> non-negative.
CommutatorSign resolve_sign(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b,
                            CommutatorSign sign);

/// Throws NotOrthogonal unless psi_perp is a unit vector orthogonal to psi
/// within 1e-10.
double bound_ra(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b,
                const PureState& psi_perp, CommutatorSign sign = CommutatorSign::Auto);

/// Built from the explicit orthogonal direction of A + B; zero when Var(A+B)
/// vanishes.
double bound_rb(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b);

/// Uses orthogonal_state(psi, A) for R_a, falling back to B's direction and
/// then to any orthogonal vector when psi is an eigenstate.
MpurReport mpur_check(const PureState& psi, const ComplexMatrix& a, const ComplexMatrix& b);
MpurReport mpur_check(const PureState& psi, const Observable& a, const Observable& b);

struct ConditionalMpurSum {
  double backward_extracted = 0.0;  // Var(A|B)
  double forward_extracted = 0.0;   // Var(B|A)
  double sum = 0.0;
  double classical_bound = 0.0;     // max(R_a, R_b) for the initial pure state
  bool below = false;
};

/// Var(A|B) + Var(B|A) for recorded outcomes (x1, x2), compared with the
/// unconditioned bound. Requires a pure initial state (purity within 1e-10).
ConditionalMpurSum conditional_mpur_sum(const DensityMatrix& rho0, const MeasurementStage& stage1,
                                        const MeasurementStage& stage2, double x1, double x2);

/// Dominant eigenvector of a rank-one density matrix; throws InvalidArgument
/// for mixed states.
PureState purify_rank_one(const DensityMatrix& rho);

}  // namespace seqmeas
