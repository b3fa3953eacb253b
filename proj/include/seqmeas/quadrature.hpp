#pragma once

// Adaptive Gauss-Kronrod integration over finite pointer-outcome windows.
// Used only as an independent check on the closed-form moment algebra.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "seqmeas/error.hpp"

namespace seqmeas::oracle {

struct QuadratureConfig {
  /// Window half-padding in pointer widths beyond the extreme eigenvalues.
  double domain_pad = 10.0;
  double abs_tol = 1e-10;
  std::size_t max_subdivisions = std::size_t{1} << 16;

  void validate() const;
};

struct Domain {
  double lo;
  double hi;
};

/// [min_level - pad*sigma, max_level + pad*sigma]
Domain padded_domain(double min_level, double max_level, double sigma, const QuadratureConfig& cfg);

struct QuadratureResult {
  double value;
  double error_estimate;
};

/// Adaptive G7/K15 quadrature; throws QuadratureFailure if the error estimate
/// exceeds abs_tol * max(1, L1 norm) at the subdivision cap.
/// Breakpoints inside the domain seed the initial panels, so narrow peaks
/// placed there cannot fall between the first nodes.
QuadratureResult integrate(const std::function<double(double)>& f, Domain domain,
                           const QuadratureConfig& cfg, std::span<const double> breakpoints = {});

/// Integral of x^n f(x) over the domain, n in {0, 1, 2}.
double quad_moment(const std::function<double(double)>& f, Domain domain, int n,
                   const QuadratureConfig& cfg, std::span<const double> breakpoints = {});

/// Levels and their pairwise midpoints: where pair products of pointer
/// amplitudes peak.
std::vector<double> level_breakpoints(std::span<const double> levels);

}  // namespace seqmeas::oracle
