#include "simplexflow/time_embedding.hpp"

#include <cmath>

#include "simplexflow/errors.hpp"

namespace simplexflow {

Vector time_embedding(double t, int dim) {
  if (dim <= 0 || dim % 2 != 0) throw ConfigError("time embedding dimension must be positive and even");
  const int half = dim / 2;
  Vector out(dim);
  for (int j = 0; j < half; ++j) {
    const double omega = kTimeEmbeddingScale * std::pow(10000.0, -2.0 * j / dim);
    out[j] = std::sin(t * omega);
    out[half + j] = std::cos(t * omega);
  }
  return out;
}

}  // namespace simplexflow
