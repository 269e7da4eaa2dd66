#include "simplexflow/linear_fm.hpp"

#include "simplexflow/errors.hpp"

namespace simplexflow {

TrainConfig linear_fm_config(TrainConfig cfg) {
  cfg.model.map = MapKind::linear;
  cfg.model.base = BaseKind::uniform_simplex;
  cfg.model.interpolation.scaling = false;
  return cfg;
}

TrainResult linear_fm_train(const TrainingData& data, const TrainConfig& cfg) {
  return train(data, linear_fm_config(cfg));
}

SampleResult linear_fm_sample(const VelocityField& field, const FlowModelSpec& spec, int n,
                              const SolverConfig& solver, std::uint64_t seed, int threads) {
  if (spec.map != MapKind::linear) throw ConfigError("linear_fm_sample needs a LinearFM model");
  return sample(field, spec, n, solver, seed, {true, threads});
}

Matrix linear_fm_raw_outputs(const VelocityField& field, const FlowModelSpec& spec, int n,
                             const SolverConfig& solver, std::uint64_t seed, int threads) {
  if (spec.map != MapKind::linear) throw ConfigError("linear_fm_raw_outputs needs a LinearFM model");
  const SampleResult s = sample(field, spec, n, solver, seed, {false, threads});
  const SimplexCoordinates coords = SimplexCoordinates::for_model(spec);
  Matrix raw(spec.categories, n);
  for (int i = 0; i < n; ++i) raw.col(i) = coords.decode_raw(s.z1.col(i));
  return raw;
}

}  // namespace simplexflow
