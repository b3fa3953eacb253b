#pragma once

// Dense complex linear algebra for small finite-dimensional systems:
// Hermitian eigendecomposition, spectral observables, density matrices and
// pure states.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "seqmeas/error.hpp"

namespace seqmeas {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDegeneracyTol = 1e-9;

/// max_ij |M_ij - conj(M_ji)|
double hermitian_defect(const ComplexMatrix& m);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

/// (M + M^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct Eigensystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // column i pairs with values[i]
};

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Throws NotHermitian when the input violates kHermitianTol (relative to its
/// largest entry when that exceeds one) and NoConvergence if the off-diagonal
/// norm has not vanished after `max_sweeps` full sweeps.
Eigensystem eigh(const ComplexMatrix& m, int max_sweeps = 64);

/// Partition ascending eigenvalues into runs whose consecutive gaps are within
/// gap_tol. Each run becomes one spectral projector.
std::vector<std::vector<std::size_t>> group_degenerate(std::span<const double> ascending,
                                                       double gap_tol = kDegeneracyTol);

/// Hermitian operator held in spectral form. Distinct eigenvalues ("levels")
/// each own one projector; degenerate eigenvectors share a level.
class Observable {
 public:
  /// Diagonalizes `matrix`; throws NotHermitian / NoConvergence.
  explicit Observable(const ComplexMatrix& matrix, double gap_tol = kDegeneracyTol);

  /// Builds from eigenvalues and orthonormal eigenvector columns.
  static Observable from_spectrum(std::span<const double> eigenvalues,
                                  const ComplexMatrix& eigenvectors,
                                  double gap_tol = kDegeneracyTol);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const noexcept { return eigenvectors_; }

  std::size_t level_count() const noexcept { return levels_.size(); }
  const std::vector<double>& levels() const noexcept { return levels_; }
  const std::vector<ComplexMatrix>& projectors() const noexcept { return projectors_; }
  /// Level index of eigenvector column i.
  std::size_t level_of(std::size_t column) const { return level_of_.at(column); }

 private:
  Observable() = default;
  void build_levels(double gap_tol);

  ComplexMatrix matrix_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
  std::vector<double> levels_;
  std::vector<ComplexMatrix> projectors_;
  std::vector<std::size_t> level_of_;
};

/// Unit-norm state vector.
class PureState {
 public:
  /// Requires norm 1 within 1e-12.
  explicit PureState(ComplexVector amplitudes);
  /// Rescales to unit norm; throws InvalidArgument for the zero vector.
  static PureState normalized(const ComplexVector& amplitudes);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }

 private:
  ComplexVector amplitudes_;
};

/// Positive semidefinite Hermitian matrix with explicit trace bookkeeping.
///
/// Stored as a trace-one shape plus the natural log of the trace, so states
/// produced by long chains of Gaussian-weighted Kraus maps keep full relative
/// precision even when the absolute likelihood is far below the smallest
/// normal double.
class DensityMatrix {
 public:
  /// Validates Hermiticity, PSD and a positive finite trace.
  explicit DensityMatrix(const ComplexMatrix& matrix);

  static DensityMatrix from_pure(const PureState& psi);

  /// Trusted construction from a positive-trace shape and a log-scale factor:
  /// the represented matrix is exp(log_scale) * shape. The shape is
  /// symmetrized and renormalized; no eigenvalue check is performed.
  static DensityMatrix from_scaled(const ComplexMatrix& shape, double log_scale);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(shape_.rows()); }

  /// Trace-one representative.
  const ComplexMatrix& normalized_matrix() const noexcept { return shape_; }
  /// The represented (possibly unnormalized) matrix. May underflow to zero
  /// when log_trace() is very negative.
  ComplexMatrix matrix() const;

  double log_trace() const noexcept { return log_trace_; }
  double trace() const;
  bool is_normalized(double tol = 1e-12) const;
  DensityMatrix normalized() const;

 private:
  DensityMatrix() = default;
  ComplexMatrix shape_;
  double log_trace_ = 0.0;
};

double expectation(const ComplexMatrix& op, const DensityMatrix& rho);
double expectation(const ComplexMatrix& op, const PureState& psi);

/// Tr[A^2 rho] - Tr[A rho]^2 on the normalized state; roundoff down to -1e-12
/// is clamped to zero.
double variance_of(const Observable& obs, const DensityMatrix& rho);
double variance_of(const ComplexMatrix& op, const PureState& psi);

void require_same_dim(std::size_t a, std::size_t b, const char* what);

}  // namespace seqmeas
