#include "seqmeas/random_instances.hpp"

namespace seqmeas::oracle {

namespace {

ComplexMatrix gaussian_matrix(std::size_t dim, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      g(i, j) = Complex(re, rng.normal());
    }
  return g;
}

}  // namespace

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) {
  return hermitian_part(gaussian_matrix(dim, rng));
}

PureState random_pure_state(std::size_t dim, Rng& rng) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (auto& c : v) {
    const double re = rng.normal();
    c = Complex(re, rng.normal());
  }
  return PureState::normalized(v);
}

DensityMatrix random_density(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, rng);
  const ComplexMatrix m = g * g.adjoint();
  return DensityMatrix(hermitian_part(m / m.trace().real()));
}

Observable random_observable(std::size_t dim, Rng& rng) {
  const Eigensystem basis = eigh(random_hermitian(dim, rng));
  std::vector<double> values(dim);
  for (double& v : values) v = 2.0 * rng.uniform() - 1.0;
  return Observable::from_spectrum(values, basis.vectors);
}

}  // namespace seqmeas::oracle
