#include "simplexflow/composition.hpp"

#include <cmath>
#include <string>

#include "simplexflow/errors.hpp"

namespace simplexflow {

Composition::Composition(Vector values) : values_(std::move(values)) {
  if (values_.size() < 2)
    throw DimensionError("composition needs at least 2 categories, got " +
                         std::to_string(values_.size()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < kMinComponent)
      throw DomainError("composition component " + std::to_string(i) +
                        " is not in the open simplex: " + std::to_string(v));
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw DomainError("composition does not sum to 1 (sum = " + std::to_string(sum) + ")");
}

Composition Composition::uniform(int categories) {
  if (categories < 2) throw DimensionError("uniform composition needs K >= 2");
  return Composition(Vector::Constant(categories, 1.0 / categories));
}

Composition Composition::closure(const Vector& positive) {
  for (Eigen::Index i = 0; i < positive.size(); ++i)
    if (!(positive[i] > 0.0) || !std::isfinite(positive[i]))
      throw DomainError("closure requires strictly positive finite entries");
  return Composition(positive / positive.sum());
}

void require_finite(const Vector& z, const char* what) {
  if (!z.allFinite()) throw DomainError(std::string(what) + ": non-finite input");
}

Vector softmax(const Vector& logits) {
  const double shift = logits.maxCoeff();
  Vector e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

double log_sum_exp(const Vector& values) {
  const double shift = values.maxCoeff();
  if (!std::isfinite(shift)) return shift;
  return shift + std::log((values.array() - shift).exp().sum());
}

}  // namespace simplexflow
