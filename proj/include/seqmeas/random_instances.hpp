#pragma once

// Random test instances for property checks.

#include "seqmeas/sampling.hpp"

namespace seqmeas::oracle {

/// Hermitian matrix with independent N(0, 1) real and imaginary parts.
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);

/// Haar-random unit vector.
PureState random_pure_state(std::size_t dim, Rng& rng);

/// Hilbert-Schmidt random density matrix of full rank.
DensityMatrix random_density(std::size_t dim, Rng& rng);

/// Observable with random eigenbasis and eigenvalues uniform in [-1, 1].
Observable random_observable(std::size_t dim, Rng& rng);

}  // namespace seqmeas::oracle
