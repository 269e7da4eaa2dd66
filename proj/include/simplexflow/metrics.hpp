#pragma once

#include <span>

#include "simplexflow/categorical.hpp"

namespace simplexflow {

// Additive smoothing applied to empirical counts before KL.
inline constexpr double kCountSmoothing = 1e-12;

struct DistributionMetrics {
  double kl = 0.0;  // KL(truth || estimate), nats
  double tv = 0.0;  // 1/2 sum |estimate - truth|
};

double kl_divergence(const CategoricalDistribution& p, const CategoricalDistribution& q);
double total_variation(const CategoricalDistribution& p, const CategoricalDistribution& q);

DistributionMetrics eval_metrics(const CategoricalDistribution& truth, const CategoricalDistribution& estimate);
// Empirical law of sampled categories with kCountSmoothing.
DistributionMetrics eval_metrics(const CategoricalDistribution& truth, std::span<const int> samples);

}  // namespace simplexflow
