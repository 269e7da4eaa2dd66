#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace simplexflow {

inline constexpr double kProbabilityTolerance = 1e-12;

// Law of a K-category random variable. Entries are nonnegative and sum to 1
// within kProbabilityTolerance.
class CategoricalDistribution {
 public:
  explicit CategoricalDistribution(std::vector<double> probs);

  // Normalises nonnegative weights with positive total.
  static CategoricalDistribution from_weights(std::vector<double> weights);
  // Frequencies of category indices in [0, K), plus `smoothing` mass on every
  // category before normalisation.
  static CategoricalDistribution from_counts(std::span<const int> categories, int k,
                                             double smoothing = 0.0);

  int categories() const { return static_cast<int>(probs_.size()); }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  std::vector<double> probs_;
};

}  // namespace simplexflow
