#pragma once

#include <vector>

#include "simplexflow/coupling.hpp"
#include "simplexflow/velocity_field.hpp"

namespace simplexflow {

// Batches are split into fixed chunks for gradient evaluation; chunk sums are
// reduced in chunk order so results do not depend on the thread count.
inline constexpr int kGradientChunk = 64;

struct CfmLoss {
  double loss = 0.0;
  std::vector<double> grads;
};

// mean_i ||v(z_t^i, t_i) - (z1^i - z0^i)||^2 with z_t^i on the linear path.
CfmLoss cfm_loss(const VelocityField& field, const PairedBatch& batch, const Vector& t, int threads = 1);
double cfm_loss_value(const VelocityField& field, const PairedBatch& batch, const Vector& t);

}  // namespace simplexflow
