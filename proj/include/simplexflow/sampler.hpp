#pragma once

#include <cstdint>
#include <vector>

#include "simplexflow/coordinates.hpp"
#include "simplexflow/solver.hpp"
#include "simplexflow/velocity_field.hpp"

namespace simplexflow {

// Trajectories are generated in fixed chunks, each with its own RNG stream
// derived from (seed, chunk), so output does not depend on the thread count.
inline constexpr int kSampleChunk = 256;

struct SampleOptions {
  bool decode_compositions = true;
  int threads = 1;
};

struct SampleResult {
  Matrix z1;                              // D x n terminal states
  std::vector<Composition> compositions;  // when decode_compositions
  std::vector<int> categories;            // when the model is discrete
};

// z0 ~ p0, integrate 0 -> 1, x = phi^-1(z1), category = argmax x.
SampleResult sample(const VelocityField& field, const FlowModelSpec& spec, int n, const SolverConfig& solver,
                    std::uint64_t seed, const SampleOptions& options = {});

}  // namespace simplexflow
