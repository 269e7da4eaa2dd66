#include "simplexflow/interpolation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "simplexflow/errors.hpp"
#include "simplexflow/logging.hpp"

namespace simplexflow {

void InterpolationConfig::validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw ParameterError("interpolation lambda must lie in (0, 1], got " + std::to_string(lambda));
  if (!deterministic && !(alpha > 0.0 && std::isfinite(alpha)))
    throw ParameterError("Dirichlet concentration must be positive and finite");
  if (lambda < 0.5)
    log_warning("interpolation lambda < 1/2: component supports overlap and argmax recovery is not guaranteed");
}

Composition interpolate(int category, int categories, const InterpolationConfig& cfg, Rng& rng) {
  if (category < 0 || category >= categories)
    throw DimensionError("category index " + std::to_string(category) + " out of range");
  Vector x = cfg.deterministic ? Vector::Constant(categories, 1.0 / categories)
                               : sample_symmetric_dirichlet(cfg.alpha, categories, rng).values();
  x *= 1.0 - cfg.lambda;
  x[category] += cfg.lambda;
  return Composition(std::move(x));
}

int argmax_category(const Vector& x) {
  int best = 0;
  for (int i = 1; i < x.size(); ++i)
    if (x[i] > x[best]) best = i;
  return best;
}

double component_logpdf(const Composition& x, int category, double lambda, const Vector& alpha) {
  const int k = x.categories();
  if (category < 0 || category >= k) throw DimensionError("category index out of range");
  if (alpha.size() != k) throw DimensionError("component_logpdf: concentration size mismatch");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("component density needs lambda in (0, 1)");
  const double scale = 1.0 - lambda;
  Vector y = x.values() / scale;
  y[category] = (x[category] - lambda) / scale;
  if ((y.array() <= 0.0).any()) return -std::numeric_limits<double>::infinity();
  return -(k - 1) * std::log(scale) + dirichlet_logpdf(y, alpha);
}

double component_logpdf(const Composition& x, int category, const InterpolationConfig& cfg) {
  if (cfg.deterministic) throw ParameterError("component density undefined for deterministic interpolation");
  if (!(cfg.alpha > 0.0)) throw ParameterError("Dirichlet concentration must be positive");
  return component_logpdf(x, category, cfg.lambda, Vector::Constant(x.categories(), cfg.alpha));
}

double mixture_logpdf(const Composition& x, const CategoricalDistribution& p, const InterpolationConfig& cfg) {
  if (p.categories() != x.categories()) throw DimensionError("mixture_logpdf: category count mismatch");
  if (cfg.lambda < 0.5) log_warning("mixture_logpdf: lambda < 1/2, component supports overlap");
  Vector terms(x.categories());
  for (int k = 0; k < x.categories(); ++k)
    terms[k] = p[k] > 0.0 ? std::log(p[k]) + component_logpdf(x, k, cfg)
                          : -std::numeric_limits<double>::infinity();
  return log_sum_exp(terms);
}

Composition mean_composition(int category, double lambda, int categories) {
  if (category < 0 || category >= categories) throw DimensionError("category index out of range");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("mean composition needs lambda in (0, 1)");
  Vector mu = Vector::Constant(categories, (1.0 - lambda) / categories);
  mu[category] += lambda;
  return Composition(std::move(mu));
}

double mean_aitchison_norm(double lambda, int categories) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("mean norm is degenerate for lambda in {0, 1}");
  if (categories < 2) throw DimensionError("mean norm needs K >= 2");
  const double k = categories;
  return std::sqrt((k - 1.0) / k) * std::log1p(k * lambda / (1.0 - lambda));
}

}  // namespace simplexflow
