#include "seqmeas/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace seqmeas {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidOrder: return "InvalidOrder";
    case ErrorKind::NonHermitianSum: return "NonHermitianSum";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::ZeroLikelihood: return "ZeroLikelihood";
    case ErrorKind::DegenerateDirection: return "DegenerateDirection";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::DenominatorNonPositive: return "DenominatorNonPositive";
    case ErrorKind::RejectionStall: return "RejectionStall";
    case ErrorKind::InvalidRange: return "InvalidRange";
    case ErrorKind::ConfigParse: return "ConfigParse";
  }
  return "Unknown";
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension " << a << " vs " << b;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

namespace {

void require_hermitian(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + ": matrix must be square and non-empty");
  }
  if (!all_finite(m)) throw Error(ErrorKind::InvalidArgument, std::string(what) + ": non-finite entry");
  const double scale = std::max(1.0, max_abs(m));
  const double defect = hermitian_defect(m);
  if (defect > kHermitianTol * scale) {
    std::ostringstream os;
    os << what << ": max |M - M^dagger| = " << defect;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
}

double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

}  // namespace

Eigensystem eigh(const ComplexMatrix& m, int max_sweeps) {
  require_hermitian(m, "eigh");
  const Eigen::Index n = m.rows();
  ComplexMatrix a = hermitian_part(m);
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double total = a.squaredNorm();
  const double stop = total * 1e-32;
  bool converged = off_diagonal_norm2(a) <= stop;

  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag < 1e-300 || mag <= 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Phase-align a_pq to a real positive value, then a real rotation.
        const Complex phase = apq / mag;
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
    converged = off_diagonal_norm2(a) <= stop;
  }
  if (!converged) {
    throw Error(ErrorKind::NoConvergence, "eigh: Jacobi sweeps exhausted");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  Eigensystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

std::vector<std::vector<std::size_t>> group_degenerate(std::span<const double> ascending,
                                                       double gap_tol) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    if (i == 0 || ascending[i] - ascending[i - 1] > gap_tol) groups.emplace_back();
    groups.back().push_back(i);
  }
  return groups;
}

// ---------------------------------------------------------------------------
// Observable

Observable::Observable(const ComplexMatrix& matrix, double gap_tol) {
  Eigensystem es = eigh(matrix);
  matrix_ = hermitian_part(matrix);
  eigenvalues_ = std::move(es.values);
  eigenvectors_ = std::move(es.vectors);
  build_levels(gap_tol);
}

Observable Observable::from_spectrum(std::span<const double> eigenvalues,
                                     const ComplexMatrix& eigenvectors, double gap_tol) {
  const auto n = static_cast<Eigen::Index>(eigenvalues.size());
  if (n == 0 || eigenvectors.rows() != n || eigenvectors.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "from_spectrum: need n eigenvalues and n x n vectors");
  }
  const double unitarity =
      max_abs(eigenvectors.adjoint() * eigenvectors - ComplexMatrix::Identity(n, n));
  if (unitarity > 1e-10) {
    throw Error(ErrorKind::InvalidArgument, "from_spectrum: eigenvectors are not orthonormal");
  }
  std::vector<std::size_t> order(eigenvalues.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return eigenvalues[i] < eigenvalues[j]; });

  Observable obs;
  obs.eigenvalues_.resize(n);
  obs.eigenvectors_.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    obs.eigenvalues_[k] = eigenvalues[src];
    obs.eigenvectors_.col(k) = eigenvectors.col(static_cast<Eigen::Index>(src));
  }
  obs.matrix_ = obs.eigenvectors_ * obs.eigenvalues_.cast<Complex>().asDiagonal() *
                obs.eigenvectors_.adjoint();
  obs.matrix_ = hermitian_part(obs.matrix_);
  obs.build_levels(gap_tol);
  return obs;
}

void Observable::build_levels(double gap_tol) {
  const auto n = static_cast<std::size_t>(eigenvalues_.size());
  std::vector<double> values(eigenvalues_.data(), eigenvalues_.data() + n);
  const auto groups = group_degenerate(values, gap_tol);
  levels_.clear();
  projectors_.clear();
  level_of_.assign(n, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double mean = 0.0;
    ComplexMatrix p = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t col : groups[g]) {
      mean += values[col];
      const auto c = static_cast<Eigen::Index>(col);
      p += eigenvectors_.col(c) * eigenvectors_.col(c).adjoint();
      level_of_[col] = g;
    }
    levels_.push_back(mean / static_cast<double>(groups[g].size()));
    projectors_.push_back(std::move(p));
  }
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(ErrorKind::InvalidArgument, "PureState: empty vector");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "PureState: amplitudes must have unit norm");
  }
}

PureState PureState::normalized(const ComplexVector& amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "PureState: cannot normalize a zero or non-finite vector");
  }
  return PureState(amplitudes / n);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const ComplexMatrix& matrix) {
  require_hermitian(matrix, "DensityMatrix");
  const ComplexMatrix h = hermitian_part(matrix);
  const double tr = h.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw Error(ErrorKind::NotPositive, "DensityMatrix: trace must be positive and finite");
  }
  const Eigensystem es = eigh(h);
  if (es.values[0] < -kPsdTol * std::max(1.0, tr)) {
    std::ostringstream os;
    os << "DensityMatrix: min eigenvalue " << es.values[0];
    throw Error(ErrorKind::NotPositive, os.str());
  }
  shape_ = h / tr;
  log_trace_ = std::log(tr);
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  DensityMatrix rho;
  rho.shape_ = psi.amplitudes() * psi.amplitudes().adjoint();
  rho.shape_ = hermitian_part(rho.shape_);
  rho.shape_ /= rho.shape_.trace().real();
  rho.log_trace_ = 0.0;
  return rho;
}

DensityMatrix DensityMatrix::from_scaled(const ComplexMatrix& shape, double log_scale) {
  const ComplexMatrix h = hermitian_part(shape);
  const double tr = h.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr) || !std::isfinite(log_scale)) {
    throw Error(ErrorKind::ZeroLikelihood, "state trace vanished or is not finite");
  }
  DensityMatrix rho;
  rho.shape_ = h / tr;
  rho.log_trace_ = log_scale + std::log(tr);
  return rho;
}

ComplexMatrix DensityMatrix::matrix() const { return shape_ * std::exp(log_trace_); }

double DensityMatrix::trace() const { return std::exp(log_trace_); }

bool DensityMatrix::is_normalized(double tol) const { return std::abs(std::expm1(log_trace_)) <= tol; }

DensityMatrix DensityMatrix::normalized() const {
  DensityMatrix out = *this;
  out.log_trace_ = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// statistics

double expectation(const ComplexMatrix& op, const DensityMatrix& rho) {
  require_same_dim(static_cast<std::size_t>(op.rows()), rho.dim(), "expectation");
  return (op * rho.normalized_matrix()).trace().real();
}

double expectation(const ComplexMatrix& op, const PureState& psi) {
  require_same_dim(static_cast<std::size_t>(op.rows()), psi.dim(), "expectation");
  return psi.amplitudes().dot(op * psi.amplitudes()).real();
}

double variance_of(const Observable& obs, const DensityMatrix& rho) {
  require_same_dim(obs.dim(), rho.dim(), "variance_of");
  // Evaluate in the eigenbasis: populations of each level.
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < obs.level_count(); ++i) {
    const double p = (obs.projectors()[i] * rho.normalized_matrix()).trace().real();
    m1 += p * obs.levels()[i];
    m2 += p * obs.levels()[i] * obs.levels()[i];
  }
  const double v = m2 - m1 * m1;
  return v < 0.0 ? 0.0 : v;
}

double variance_of(const ComplexMatrix& op, const PureState& psi) {
  require_same_dim(static_cast<std::size_t>(op.rows()), psi.dim(), "variance_of");
  const ComplexVector a_psi = op * psi.amplitudes();
  const double mean = psi.amplitudes().dot(a_psi).real();
  const double v = a_psi.squaredNorm() - mean * mean;
  return v < 0.0 ? 0.0 : v;
}

}  // namespace seqmeas
