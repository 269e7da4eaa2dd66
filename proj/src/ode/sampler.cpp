#include "simplexflow/sampler.hpp"

#include <algorithm>

#include "simplexflow/errors.hpp"
#include "simplexflow/parallel.hpp"

namespace simplexflow {

SampleResult sample(const VelocityField& field, const FlowModelSpec& spec, int n, const SolverConfig& solver,
                    std::uint64_t seed, const SampleOptions& options) {
  spec.validate();
  solver.validate();
  if (n < 0) throw ConfigError("sample count must be nonnegative");
  if (field.dim() != spec.dim()) throw DimensionError("field dimension does not match the model");
  const SimplexCoordinates coords = SimplexCoordinates::for_model(spec);
  const int d = coords.dim();

  SampleResult out;
  out.z1.resize(d, n);
  const std::size_t chunks = static_cast<std::size_t>((n + kSampleChunk - 1) / kSampleChunk);
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    const int begin = static_cast<int>(c) * kSampleChunk;
    const int len = std::min(kSampleChunk, n - begin);
    Rng rng = make_rng(seed, c);
    Matrix z0(d, len);
    for (int i = 0; i < len; ++i) z0.col(i) = sample_base(spec.base, coords, rng);
    out.z1.middleCols(begin, len) = integrate(field, z0, Direction::forward, solver);
  });

  if (spec.is_discrete) {
    out.categories.resize(n);
    for (int i = 0; i < n; ++i) out.categories[i] = coords.decode_category(out.z1.col(i));
  }
  if (options.decode_compositions) {
    out.compositions.reserve(n);
    for (int i = 0; i < n; ++i) out.compositions.push_back(coords.decode(out.z1.col(i)));
  }
  return out;
}

}  // namespace simplexflow
