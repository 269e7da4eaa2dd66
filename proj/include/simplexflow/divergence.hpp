#pragma once

#include <vector>

#include "simplexflow/dirichlet.hpp"
#include "simplexflow/velocity_field.hpp"

namespace simplexflow {

// automatic: exact up to kExactDivergenceMaxDim, Hutchinson beyond.
enum class DivergenceMode { exact, hutchinson, automatic };

inline constexpr int kExactDivergenceMaxDim = 32;

struct DivergenceConfig {
  DivergenceMode mode = DivergenceMode::automatic;
  int probes = 8;

  void validate() const;
  bool exact_for(int dim) const {
    return mode == DivergenceMode::exact || (mode == DivergenceMode::automatic && dim <= kExactDivergenceMaxDim);
  }
};

// D x B matrices of +-1 entries.
std::vector<Matrix> rademacher_probes(int dim, Eigen::Index batch, int count, Rng& rng);

struct VelocityWithDivergence {
  Matrix velocity;   // D x B
  Vector divergence; // B
};

// Exact trace of dv/dz via D input-gradient passes.
VelocityWithDivergence velocity_and_exact_divergence(const VelocityField& field, const Matrix& z, const Vector& t);
// Mean over probes of eps^T (dv/dz) eps.
VelocityWithDivergence velocity_and_hutchinson_divergence(const VelocityField& field, const Matrix& z,
                                                          const Vector& t, const std::vector<Matrix>& probes);

// Per-column divergence of v(., t) at z. Hutchinson mode draws fresh probes from rng.
Vector divergence(const VelocityField& field, const Matrix& z, double t, const DivergenceConfig& cfg,
                  Rng* rng = nullptr);

}  // namespace simplexflow
