#include "simplexflow/metrics.hpp"

#include <cmath>
#include <limits>

#include "simplexflow/errors.hpp"

namespace simplexflow {
namespace {
void require_same_size(const CategoricalDistribution& p, const CategoricalDistribution& q) {
  if (p.categories() != q.categories()) throw DimensionError("distributions have different category counts");
}
}  // namespace

double kl_divergence(const CategoricalDistribution& p, const CategoricalDistribution& q) {
  require_same_size(p, q);
  double kl = 0.0;
  for (int k = 0; k < p.categories(); ++k) {
    if (p[k] == 0.0) continue;
    if (q[k] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p[k] * std::log(p[k] / q[k]);
  }
  return kl;
}

double total_variation(const CategoricalDistribution& p, const CategoricalDistribution& q) {
  require_same_size(p, q);
  double tv = 0.0;
  for (int k = 0; k < p.categories(); ++k) tv += std::abs(q[k] - p[k]);
  return 0.5 * tv;
}

DistributionMetrics eval_metrics(const CategoricalDistribution& truth, const CategoricalDistribution& estimate) {
  return {kl_divergence(truth, estimate), total_variation(truth, estimate)};
}

DistributionMetrics eval_metrics(const CategoricalDistribution& truth, std::span<const int> samples) {
  return eval_metrics(truth, CategoricalDistribution::from_counts(samples, truth.categories(), kCountSmoothing));
}

}  // namespace simplexflow
