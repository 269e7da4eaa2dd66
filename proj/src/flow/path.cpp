#include "simplexflow/path.hpp"

#include "simplexflow/errors.hpp"

namespace simplexflow {

PathSample linear_path(const Vector& z0, const Vector& z1, double t) {
  if (z0.size() != z1.size()) throw DimensionError("linear_path: endpoint dimensions differ");
  if (!(t >= 0.0 && t <= 1.0)) throw ParameterError("linear_path: t must lie in [0, 1]");
  return {z0, z1, t, (1.0 - t) * z0 + t * z1, z1 - z0};
}

bool path_sample_consistent(const PathSample& s, double tol) {
  const Vector expected_zt = (1.0 - s.t) * s.z0 + s.t * s.z1;
  const Vector expected_ut = s.z1 - s.z0;
  return (s.zt - expected_zt).cwiseAbs().maxCoeff() <= tol && (s.ut - expected_ut).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace simplexflow
