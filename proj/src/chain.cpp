#include "seqmeas/chain.hpp"

#include <cmath>
#include <sstream>

namespace seqmeas {

MeasurementChain::MeasurementChain(DensityMatrix initial, std::vector<MeasurementStage> stages)
    : initial_(std::move(initial)), stages_(std::move(stages)) {
  if (stages_.empty()) throw Error(ErrorKind::InvalidArgument, "a chain needs at least one stage");
  for (const auto& s : stages_) require_same_dim(s.dim(), initial_.dim(), "MeasurementChain");
}

void ChainQuery::validate(const MeasurementChain& chain) const {
  if (free_stage >= chain.size()) {
    std::ostringstream os;
    os << "free stage " << free_stage << " out of range for a " << chain.size() << "-stage chain";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  if (outcomes.size() != chain.size()) {
    throw Error(ErrorKind::InvalidArgument, "query needs one outcome slot per stage");
  }
  for (std::size_t j = 0; j < outcomes.size(); ++j) {
    if (j != free_stage && !std::isfinite(outcomes[j])) {
      throw Error(ErrorKind::InvalidArgument, "fixed outcomes must be finite");
    }
  }
}

DensityMatrix chain_state(const MeasurementChain& chain, std::span<const double> outcomes) {
  if (outcomes.size() > chain.size()) {
    throw Error(ErrorKind::InvalidArgument, "more outcomes than stages");
  }
  DensityMatrix rho = chain.initial();
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const ScaledKraus m = scaled_kraus_at(chain.stage(k), outcomes[k]);
    const ComplexMatrix shape = m.matrix * rho.normalized_matrix() * m.matrix.adjoint();
    rho = DensityMatrix::from_scaled(shape, rho.log_trace() + 2.0 * m.log_scale);
  }
  return rho;
}

EffectOperator effect_chain(const MeasurementChain& chain, std::size_t first,
                            std::span<const double> outcomes) {
  if (first > chain.size() || outcomes.size() != chain.size() - first) {
    throw Error(ErrorKind::InvalidArgument, "effect_chain needs one outcome per remaining stage");
  }
  const auto n = static_cast<Eigen::Index>(chain.dim());
  EffectOperator e{ComplexMatrix::Identity(n, n), std::vector<double>(outcomes.begin(), outcomes.end()), 0.0};
  // Innermost factor is the last stage: E <- Omega_k^dagger E Omega_k for k = N-1 .. first.
  for (std::size_t k = chain.size(); k-- > first;) {
    const ScaledKraus m = scaled_kraus_at(chain.stage(k), outcomes[k - first]);
    e.matrix = hermitian_part(m.matrix.adjoint() * e.matrix * m.matrix);
    const double norm = max_abs(e.matrix);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorKind::ZeroLikelihood, "future outcomes have vanishing likelihood");
    }
    e.matrix /= norm;
    e.log_scale += 2.0 * m.log_scale + std::log(norm);
  }
  return e;
}

OutcomeDensity conditional_density_k(const MeasurementChain& chain, const ChainQuery& query) {
  query.validate(chain);
  const std::size_t k = query.free_stage;
  const std::span<const double> all(query.outcomes);
  const DensityMatrix before = chain_state(chain, all.first(k));
  const EffectOperator after = effect_chain(chain, k + 1, all.subspan(k + 1));

  const MeasurementStage& stage = chain.stage(k);
  const auto& obs = stage.observable;
  GaussianPairSum numerator;
  for (std::size_t i = 0; i < obs.level_count(); ++i) {
    const ComplexMatrix left = obs.projectors()[i] * before.normalized_matrix();
    for (std::size_t j = 0; j < obs.level_count(); ++j) {
      const Complex c = (left * obs.projectors()[j] * after.matrix).trace();
      numerator.add(c, obs.levels()[i], obs.levels()[j], stage.sigma());
    }
  }
  return OutcomeDensity(std::move(numerator), before.log_trace() + after.log_scale, stage.sigma());
}

ChainResult conditional_stats_k(const MeasurementChain& chain, const ChainQuery& query) {
  OutcomeDensity density = conditional_density_k(chain, query);
  const OutcomeStats s = density.stats();
  return {std::move(density), s.mean, s.variance, s.extracted_system_variance, s.clamped,
          s.sub_probe_width};
}

double chain_log_likelihood(const MeasurementChain& chain, std::span<const double> outcomes) {
  if (outcomes.size() != chain.size()) {
    throw Error(ErrorKind::InvalidArgument, "need one outcome per stage");
  }
  return chain_state(chain, outcomes).log_trace();
}

}  // namespace seqmeas
