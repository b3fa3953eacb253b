#include "seqmeas/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace seqmeas::oracle {

void QuadratureConfig::validate() const {
  if (!(domain_pad >= 4.0)) throw Error(ErrorKind::InvalidArgument, "quadrature pad must be >= 4");
  if (!(abs_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature tolerance must be > 0");
  if (max_subdivisions < 1) throw Error(ErrorKind::InvalidArgument, "max_subdivisions must be >= 1");
}

Domain padded_domain(double min_level, double max_level, double sigma, const QuadratureConfig& cfg) {
  return {min_level - cfg.domain_pad * sigma, max_level + cfg.domain_pad * sigma};
}

namespace {

// QUADPACK qk15: Kronrod abscissae (descending, last is the midpoint), the
// matching Kronrod weights, and the 7-point Gauss weights for xgk[1,3,5,7].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double l1;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const std::function<double(double)>& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double l1 = std::abs(fc) * kWgk[7];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    l1 += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), l1 * std::abs(half)};
}

}  // namespace

std::vector<double> level_breakpoints(std::span<const double> levels) {
  std::vector<double> out(levels.begin(), levels.end());
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j) out.push_back(0.5 * (levels[i] + levels[j]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, Domain domain,
                           const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  cfg.validate();
  if (!(domain.hi > domain.lo)) throw Error(ErrorKind::InvalidRange, "quadrature domain is empty");

  std::vector<double> edges{domain.lo};
  for (double b : breakpoints)
    if (b > domain.lo && b < domain.hi) edges.push_back(b);
  edges.push_back(domain.hi);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Globally adaptive: always bisect the panel with the largest error.
  std::priority_queue<Panel> panels;
  double value = 0.0, error = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Panel p = gauss_kronrod_15(f, edges[i], edges[i + 1]);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    panels.push(p);
  }

  auto converged = [&] { return error <= cfg.abs_tol * std::max(1.0, l1); };
  while (!converged() && panels.size() < cfg.max_subdivisions) {
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // panel is at machine resolution
    const Panel left = gauss_kronrod_15(f, worst.lo, mid);
    const Panel right = gauss_kronrod_15(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
  }
  if (!converged()) {
    // Running sums drift; recompute before deciding.
    value = error = l1 = 0.0;
    for (auto copy = panels; !copy.empty(); copy.pop()) {
      value += copy.top().value;
      error += copy.top().error;
      l1 += copy.top().l1;
    }
  }
  if (!std::isfinite(value) || !converged()) {
    std::ostringstream os;
    os << "error estimate " << error << " exceeds tolerance after " << panels.size()
       << " panels on [" << domain.lo << ", " << domain.hi << "]";
    throw Error(ErrorKind::QuadratureFailure, os.str());
  }
  return {value, error};
}

double quad_moment(const std::function<double(double)>& f, Domain domain, int n,
                   const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  if (n < 0 || n > 2) throw Error(ErrorKind::InvalidOrder, "quad_moment supports n in {0,1,2}");
  if (n == 0) return integrate(f, domain, cfg, breakpoints).value;
  return integrate([&](double x) { return (n == 1 ? x : x * x) * f(x); }, domain, cfg, breakpoints).value;
}

}  // namespace seqmeas::oracle
