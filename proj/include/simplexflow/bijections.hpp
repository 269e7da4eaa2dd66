#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "simplexflow/composition.hpp"
#include "simplexflow/helmert.hpp"

namespace simplexflow {

// Image of a composition in R^D together with log |det dz/dx_{1:D}|, where
// the last component is eliminated as x_K = 1 - sum(x_{1:D}).
struct ToEuclidean {
  EuclideanPoint z;
  double log_abs_det = 0.0;
};

// Isometric logratio: z = H log x, inverse softmax(H^T z).
ToEuclidean ilr(const Composition& x, const HelmertBasis& basis);
Composition ilr_inv(const EuclideanPoint& z, const HelmertBasis& basis);
// Convenience overloads building the classical basis for x.categories().
ToEuclidean ilr(const Composition& x);
Composition ilr_inv(const EuclideanPoint& z);

// Centered stick-breaking: z_k = mlr(x)_k + log(K - k).
ToEuclidean stick_breaking(const Composition& x);
// Unit-simplex recursion x_k = (1 - sum_{i<k} x_i) sigmoid(y_k), y_k = z_k - log(K - k).
Composition stick_breaking_inv(const EuclideanPoint& z);
// Product form x_k = prod_{i<k} (1 - sigmoid(y_i)) sigmoid(y_k). Same map as
// stick_breaking_inv; kept separately so the two can be checked against each other.
Vector stick_breaking_inv_product(const EuclideanPoint& z);

// Additive logratio against the last component.
ToEuclidean alr(const Composition& x);
Composition alr_inv(const EuclideanPoint& z);

// Multiplicative logratio.
ToEuclidean mlr(const Composition& x);
Composition mlr_inv(const EuclideanPoint& z);

// z = sqrt(x) on the positive orthant of the unit sphere. log_volume is the
// log of the volume element sqrt(det(J^T J)) = 2^-D prod x_i^-1/2.
struct SphereImage {
  Vector z;
  double log_volume = 0.0;
};
SphereImage sphere_map(const Composition& x);
Composition sphere_map_inv(const Vector& z);

enum class BijectionKind { ilr, sb, alr, mlr, sphere };

std::string_view to_string(BijectionKind kind);
BijectionKind parse_bijection_kind(std::string_view name);

// Tagged simplex map. Only ilr/sb/alr/mlr land in R^D and can carry a flow
// model; sphere lands on S^D_+ and is kept for geometric comparisons.
class Bijection {
 public:
  Bijection(BijectionKind kind, int categories);

  BijectionKind kind() const { return kind_; }
  int categories() const { return categories_; }
  int dim() const { return categories_ - 1; }
  bool euclidean() const { return kind_ != BijectionKind::sphere; }

  // For sphere, z has K entries and log_abs_det holds the log volume element.
  ToEuclidean forward(const Composition& x) const;
  Composition inverse(const Vector& z) const;

  // Unnormalised log-weights whose argmax matches the inverse composition's
  // argmax. Never underflows, so discrete decoding works for any finite z.
  Vector inverse_logits(const EuclideanPoint& z) const;

  const std::optional<HelmertBasis>& helmert() const { return helmert_; }

 private:
  BijectionKind kind_;
  int categories_;
  std::optional<HelmertBasis> helmert_;
};

}  // namespace simplexflow
