#include "seqmeas/quad_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace seqmeas::oracle {

namespace {

Domain stage_domain(const MeasurementStage& stage, const QuadratureConfig& cfg) {
  const auto& levels = stage.observable.levels();
  return padded_domain(levels.front(), levels.back(), stage.sigma(), cfg);
}

}  // namespace

QuadMoments quad_moments(const std::function<double(double)>& f, Domain domain,
                         const QuadratureConfig& cfg, std::span<const double> breakpoints) {
  const double m0 = integrate(f, domain, cfg, breakpoints).value;
  if (!(m0 > 0.0)) throw Error(ErrorKind::ZeroLikelihood, "density integrates to zero");
  // Rescale to unit mass so the absolute tolerance acts on O(1) quantities.
  auto g = [&](double x) { return f(x) / m0; };
  const double n0 = integrate(g, domain, cfg, breakpoints).value;
  const double n1 = quad_moment(g, domain, 1, cfg, breakpoints) / n0;
  const double n2 = quad_moment(g, domain, 2, cfg, breakpoints) / n0;
  return {m0, n1, n2 - n1 * n1};
}

ComplexMatrix quad_averaged_state(const ComplexMatrix& rho, const MeasurementStage& stage,
                                  const QuadratureConfig& cfg) {
  const auto n = rho.rows();
  const Domain domain = stage_domain(stage, cfg);
  const std::vector<double> bp = level_breakpoints(stage.observable.levels());
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      auto entry = [&](double x) {
        const ComplexMatrix m = kraus_at(stage, x).matrix;
        return (m.row(i) * rho * m.row(j).adjoint())(0, 0);
      };
      const double re = integrate([&](double x) { return entry(x).real(); }, domain, cfg, bp).value;
      const double im =
          i == j ? 0.0 : integrate([&](double x) { return entry(x).imag(); }, domain, cfg, bp).value;
      out(i, j) = Complex(re, im);
      out(j, i) = std::conj(out(i, j));
    }
  }
  return out;
}

QuadMoments quad_pointer1(const DensityMatrix& rho0, const MeasurementStage& stage1,
                          const QuadratureConfig& cfg) {
  const ComplexMatrix& rho = rho0.normalized_matrix();
  auto f = [&](double x) {
    const ComplexMatrix m = kraus_at(stage1, x).matrix;
    return (m * rho * m.adjoint()).trace().real();
  };
  return quad_moments(f, stage_domain(stage1, cfg), cfg, level_breakpoints(stage1.observable.levels()));
}

QuadMoments quad_pointer2(const DensityMatrix& rho0, const MeasurementStage& stage1,
                          const MeasurementStage& stage2, const QuadratureConfig& cfg) {
  const ComplexMatrix rho1 = quad_averaged_state(rho0.normalized_matrix(), stage1, cfg);
  auto f = [&](double x) {
    const ComplexMatrix m = kraus_at(stage2, x).matrix;
    return (m * rho1 * m.adjoint()).trace().real();
  };
  return quad_moments(f, stage_domain(stage2, cfg), cfg, level_breakpoints(stage2.observable.levels()));
}

QuadMoments quad_conditional(const MeasurementChain& chain, const ChainQuery& query,
                             const QuadratureConfig& cfg) {
  query.validate(chain);
  const std::size_t k = query.free_stage;
  const std::span<const double> all(query.outcomes);
  const ComplexMatrix rho = chain_state(chain, all.first(k)).normalized_matrix();
  const ComplexMatrix e = effect_chain(chain, k + 1, all.subspan(k + 1)).matrix;
  const MeasurementStage& stage = chain.stage(k);
  auto f = [&](double x) {
    const ComplexMatrix m = kraus_at(stage, x).matrix;
    return (m * rho * m.adjoint() * e).trace().real();
  };
  return quad_moments(f, stage_domain(stage, cfg), cfg, level_breakpoints(stage.observable.levels()));
}

}  // namespace seqmeas::oracle
