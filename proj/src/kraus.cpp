#include "seqmeas/kraus.hpp"

#include <algorithm>
#include <cmath>

namespace seqmeas {

ComplexMatrix EffectOperator::value() const { return matrix * std::exp(log_scale); }

std::vector<double> log_level_weights(const MeasurementStage& stage, double x) {
  std::vector<double> w;
  w.reserve(stage.observable.level_count());
  for (double a : stage.observable.levels()) w.push_back(log_amplitude(stage.pointer, x, a));
  return w;
}

KrausOperator kraus_at(const MeasurementStage& stage, double x) {
  const auto& obs = stage.observable;
  const auto n = static_cast<Eigen::Index>(obs.dim());
  KrausOperator k{ComplexMatrix::Zero(n, n), x};
  for (std::size_t i = 0; i < obs.level_count(); ++i) {
    k.matrix += amplitude(stage.pointer, x, obs.levels()[i]) * obs.projectors()[i];
  }
  return k;
}

EffectOperator effect_at(const MeasurementStage& stage, double x) {
  const auto& obs = stage.observable;
  const auto n = static_cast<Eigen::Index>(obs.dim());
  EffectOperator e{ComplexMatrix::Zero(n, n), {x}, 0.0};
  for (std::size_t i = 0; i < obs.level_count(); ++i) {
    const double amp = amplitude(stage.pointer, x, obs.levels()[i]);
    e.matrix += (amp * amp) * obs.projectors()[i];
  }
  return e;
}

ScaledKraus scaled_kraus_at(const MeasurementStage& stage, double x) {
  const auto& obs = stage.observable;
  const auto n = static_cast<Eigen::Index>(obs.dim());
  const std::vector<double> logw = log_level_weights(stage, x);
  const double top = *std::max_element(logw.begin(), logw.end());
  ScaledKraus k{ComplexMatrix::Zero(n, n), top};
  for (std::size_t i = 0; i < logw.size(); ++i) {
    const double w = std::exp(logw[i] - top);
    if (w > 0.0) k.matrix += w * obs.projectors()[i];
  }
  return k;
}

double completeness_defect(const MeasurementStage& stage, const oracle::QuadratureConfig& cfg) {
  const auto& levels = stage.observable.levels();
  return completeness_defect(
      stage, oracle::padded_domain(levels.front(), levels.back(), stage.sigma(), cfg), cfg);
}

double completeness_defect(const MeasurementStage& stage, oracle::Domain domain,
                           const oracle::QuadratureConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(stage.dim());
  ComplexMatrix total = ComplexMatrix::Zero(n, n);
  const std::vector<double> bp = oracle::level_breakpoints(stage.observable.levels());
  // Entrywise integration of M_x^dagger M_x built from the Kraus matrix.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      auto entry = [&](double x, bool imag) {
        const ComplexMatrix m = kraus_at(stage, x).matrix;
        const Complex v = m.col(i).dot(m.col(j));
        return imag ? v.imag() : v.real();
      };
      const double re = oracle::integrate([&](double x) { return entry(x, false); }, domain, cfg, bp).value;
      double im = 0.0;
      if (i != j) im = oracle::integrate([&](double x) { return entry(x, true); }, domain, cfg, bp).value;
      total(i, j) = Complex(re, im);
      total(j, i) = std::conj(total(i, j));
    }
  }
  return max_abs(total - ComplexMatrix::Identity(n, n));
}

}  // namespace seqmeas
