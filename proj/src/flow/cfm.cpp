#include "simplexflow/cfm.hpp"

#include <algorithm>

#include "simplexflow/errors.hpp"
#include "simplexflow/parallel.hpp"

namespace simplexflow {
namespace {

struct ChunkResult {
  double loss = 0.0;
  std::vector<double> grads;
};

void check_shapes(const VelocityField& field, const PairedBatch& batch, const Vector& t) {
  if (batch.z0.rows() != field.dim() || batch.z1.rows() != field.dim())
    throw DimensionError("cfm_loss: batch dimension does not match the field");
  if (batch.z0.cols() != batch.z1.cols() || t.size() != batch.z0.cols())
    throw DimensionError("cfm_loss: batch sizes differ");
  if (batch.z0.cols() == 0) throw DimensionError("cfm_loss: empty batch");
}

Matrix interpolate_path(const Matrix& z0, const Matrix& z1, const Vector& t) {
  Matrix zt(z0.rows(), z0.cols());
  for (Eigen::Index c = 0; c < z0.cols(); ++c) zt.col(c) = (1.0 - t[c]) * z0.col(c) + t[c] * z1.col(c);
  return zt;
}

}  // namespace

CfmLoss cfm_loss(const VelocityField& field, const PairedBatch& batch, const Vector& t, int threads) {
  check_shapes(field, batch, t);
  const Eigen::Index n = batch.z0.cols();
  const std::size_t chunks = static_cast<std::size_t>((n + kGradientChunk - 1) / kGradientChunk);
  std::vector<ChunkResult> results(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const Eigen::Index begin = static_cast<Eigen::Index>(c) * kGradientChunk;
    const Eigen::Index len = std::min<Eigen::Index>(kGradientChunk, n - begin);
    const Matrix z0 = batch.z0.middleCols(begin, len);
    const Matrix z1 = batch.z1.middleCols(begin, len);
    const Vector tc = t.segment(begin, len);
    ForwardCache cache;
    const Matrix residual = field.forward(interpolate_path(z0, z1, tc), tc, cache) - (z1 - z0);
    results[c].loss = residual.squaredNorm();
    results[c].grads = field.backward(cache, (2.0 / static_cast<double>(n)) * residual).params;
  });
  CfmLoss out;
  out.grads.assign(field.parameter_count(), 0.0);
  for (const auto& r : results) {
    out.loss += r.loss;
    for (std::size_t i = 0; i < out.grads.size(); ++i) out.grads[i] += r.grads[i];
  }
  out.loss /= static_cast<double>(n);
  return out;
}

double cfm_loss_value(const VelocityField& field, const PairedBatch& batch, const Vector& t) {
  check_shapes(field, batch, t);
  const Matrix residual =
      field.forward(interpolate_path(batch.z0, batch.z1, t), t) - (batch.z1 - batch.z0);
  return residual.squaredNorm() / static_cast<double>(batch.z0.cols());
}

}  // namespace simplexflow
