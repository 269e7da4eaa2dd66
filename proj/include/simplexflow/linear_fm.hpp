#pragma once

#include "simplexflow/sampler.hpp"
#include "simplexflow/trainer.hpp"

namespace simplexflow {

// Euclidean flow matching on the first D simplex coordinates. The base is the
// uniform distribution on the simplex so that straight paths start inside it.
TrainConfig linear_fm_config(TrainConfig cfg);
TrainResult linear_fm_train(const TrainingData& data, const TrainConfig& cfg);

// Samples with the clip-and-renormalise projection. With project = false the
// raw ODE outputs [z, 1 - sum z] are returned, one column per sample (K x n).
SampleResult linear_fm_sample(const VelocityField& field, const FlowModelSpec& spec, int n,
                              const SolverConfig& solver, std::uint64_t seed, int threads = 1);
Matrix linear_fm_raw_outputs(const VelocityField& field, const FlowModelSpec& spec, int n,
                             const SolverConfig& solver, std::uint64_t seed, int threads = 1);

}  // namespace simplexflow
