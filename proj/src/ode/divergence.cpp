#include "simplexflow/divergence.hpp"

#include "simplexflow/errors.hpp"

namespace simplexflow {

void DivergenceConfig::validate() const {
  if (probes < 1) throw ConfigError("Hutchinson probe count must be >= 1");
}

std::vector<Matrix> rademacher_probes(int dim, Eigen::Index batch, int count, Rng& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<Matrix> probes;
  probes.reserve(count);
  for (int p = 0; p < count; ++p) {
    Matrix eps(dim, batch);
    for (Eigen::Index c = 0; c < batch; ++c)
      for (int r = 0; r < dim; ++r) eps(r, c) = coin(rng) ? 1.0 : -1.0;
    probes.push_back(std::move(eps));
  }
  return probes;
}

VelocityWithDivergence velocity_and_exact_divergence(const VelocityField& field, const Matrix& z, const Vector& t) {
  ForwardCache cache;
  VelocityWithDivergence out;
  out.velocity = field.forward(z, t, cache);
  out.divergence = Vector::Zero(z.cols());
  Matrix unit = Matrix::Zero(field.dim(), z.cols());
  for (int i = 0; i < field.dim(); ++i) {
    unit.row(i).setOnes();
    out.divergence += field.input_gradient(cache, unit).row(i).transpose();
    unit.row(i).setZero();
  }
  return out;
}

VelocityWithDivergence velocity_and_hutchinson_divergence(const VelocityField& field, const Matrix& z,
                                                          const Vector& t, const std::vector<Matrix>& probes) {
  if (probes.empty()) throw ConfigError("Hutchinson estimator needs at least one probe");
  ForwardCache cache;
  VelocityWithDivergence out;
  out.velocity = field.forward(z, t, cache);
  out.divergence = Vector::Zero(z.cols());
  for (const Matrix& eps : probes) {
    if (eps.rows() != z.rows() || eps.cols() != z.cols()) throw DimensionError("probe shape does not match state");
    out.divergence += field.input_gradient(cache, eps).cwiseProduct(eps).colwise().sum().transpose();
  }
  out.divergence /= static_cast<double>(probes.size());
  return out;
}

Vector divergence(const VelocityField& field, const Matrix& z, double t, const DivergenceConfig& cfg, Rng* rng) {
  cfg.validate();
  const Vector times = Vector::Constant(z.cols(), t);
  if (cfg.exact_for(field.dim())) return velocity_and_exact_divergence(field, z, times).divergence;
  if (rng == nullptr) throw ConfigError("Hutchinson divergence needs an RNG");
  const auto probes = rademacher_probes(field.dim(), z.cols(), cfg.probes, *rng);
  return velocity_and_hutchinson_divergence(field, z, times, probes).divergence;
}

}  // namespace simplexflow
