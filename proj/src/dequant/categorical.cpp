#include "simplexflow/categorical.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "simplexflow/errors.hpp"

namespace simplexflow {

CategoricalDistribution::CategoricalDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) throw DimensionError("categorical distribution needs K >= 2");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ParameterError("categorical probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance)
    throw ParameterError("categorical probabilities sum to " + std::to_string(sum));
}

CategoricalDistribution CategoricalDistribution::from_weights(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total))
    throw ParameterError("categorical weights must have a positive finite total");
  for (double& w : weights) w /= total;
  return CategoricalDistribution(std::move(weights));
}

CategoricalDistribution CategoricalDistribution::from_counts(std::span<const int> categories, int k,
                                                             double smoothing) {
  if (k < 2) throw DimensionError("categorical distribution needs K >= 2");
  std::vector<double> counts(k, smoothing);
  for (int c : categories) {
    if (c < 0 || c >= k) throw DimensionError("category index " + std::to_string(c) + " out of range");
    counts[c] += 1.0;
  }
  return from_weights(std::move(counts));
}

}  // namespace simplexflow
