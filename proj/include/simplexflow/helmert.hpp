#pragma once

#include "simplexflow/composition.hpp"

namespace simplexflow {

// Orthonormal basis of the sum-zero hyperplane in R^K, stored as D x K rows.
// Row j (1-indexed) is (1, ..., 1, -j, 0, ..., 0) / sqrt(j (j + 1)) with j ones.
class HelmertBasis {
 public:
  explicit HelmertBasis(int categories);

  int categories() const { return categories_; }
  int dim() const { return categories_ - 1; }
  const Matrix& matrix() const { return matrix_; }

  // log |det H[0:D, 0:D]| = -1/2 log K.
  double reduced_log_abs_det() const;

 private:
  int categories_;
  Matrix matrix_;
};

}  // namespace simplexflow
