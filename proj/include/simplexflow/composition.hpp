#pragma once

#include <Eigen/Dense>

namespace simplexflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A point z in R^D. Entries are checked for finiteness at the map boundaries
// rather than wrapped in a separate type.
using EuclideanPoint = Eigen::VectorXd;

inline constexpr double kSumTolerance = 1e-9;
inline constexpr double kMinComponent = 1e-300;

// Point in the open simplex: K >= 2 strictly positive components summing to 1.
// Construction validates and never clamps.
class Composition {
 public:
  explicit Composition(Vector values);

  static Composition uniform(int categories);
  // v / sum(v) for a strictly positive vector.
  static Composition closure(const Vector& positive);

  int categories() const { return static_cast<int>(values_.size()); }
  int dim() const { return categories() - 1; }
  const Vector& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }

 private:
  Vector values_;
};

// Throws DomainError on any non-finite entry.
void require_finite(const Vector& z, const char* what);

// Max-shifted softmax and log-sum-exp.
Vector softmax(const Vector& logits);
double log_sum_exp(const Vector& values);

}  // namespace simplexflow
