#include "simplexflow/dirichlet.hpp"

#include <cmath>

#include "simplexflow/errors.hpp"
#include "simplexflow/special_functions.hpp"

namespace simplexflow {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return Rng(seq);
}

Composition sample_symmetric_dirichlet(double alpha, int categories, Rng& rng) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ParameterError("Dirichlet concentration must be positive and finite");
  if (categories < 2) throw DimensionError("Dirichlet needs K >= 2");
  Vector draws(categories);
  if (alpha >= 1.0) {
    // libstdc++ implements Marsaglia-Tsang here.
    std::gamma_distribution<double> gamma(alpha, 1.0);
    for (int i = 0; i < categories; ++i) draws[i] = gamma(rng);
    return Composition(draws / draws.sum());
  }
  std::gamma_distribution<double> gamma(alpha + 1.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < categories; ++i) {
    double u = unif(rng);
    while (u <= 0.0) u = unif(rng);
    draws[i] = std::log(gamma(rng)) + std::log(u) / alpha;
  }
  return Composition(softmax(draws));
}

double dirichlet_logpdf(const Vector& x, const Vector& alpha) {
  if (x.size() != alpha.size()) throw DimensionError("dirichlet_logpdf: size mismatch");
  for (Eigen::Index i = 0; i < alpha.size(); ++i)
    if (!(alpha[i] > 0.0)) throw ParameterError("Dirichlet concentration must be positive");
  double acc = -log_multivariate_beta(alpha);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw DomainError("dirichlet_logpdf: x outside the open simplex");
    acc += (alpha[i] - 1.0) * std::log(x[i]);
  }
  return acc;
}

double dirichlet_logpdf(const Vector& x, double alpha) {
  return dirichlet_logpdf(x, Vector::Constant(x.size(), alpha));
}

}  // namespace simplexflow
