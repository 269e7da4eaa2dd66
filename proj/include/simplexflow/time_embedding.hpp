#pragma once

#include "simplexflow/composition.hpp"

namespace simplexflow {

inline constexpr double kTimeEmbeddingScale = 1000.0;

// Sinusoidal embedding [sin(t w_0..w_{h-1}), cos(t w_0..w_{h-1})] with
// h = dim / 2 and w_j = scale * 10000^(-2j/dim). dim must be even.
Vector time_embedding(double t, int dim);

}  // namespace simplexflow
