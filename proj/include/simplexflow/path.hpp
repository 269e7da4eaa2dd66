#pragma once

#include "simplexflow/composition.hpp"

namespace simplexflow {

// Straight-line conditional path: z_t = (1 - t) z0 + t z1 with constant
// target velocity u_t = z1 - z0.
struct PathSample {
  Vector z0;
  Vector z1;
  double t = 0.0;
  Vector zt;
  Vector ut;
};

PathSample linear_path(const Vector& z0, const Vector& z1, double t);

// Checks the algebraic invariants of a path sample to the given tolerance.
bool path_sample_consistent(const PathSample& s, double tol = 1e-12);

}  // namespace simplexflow
