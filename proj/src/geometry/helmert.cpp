#include "simplexflow/helmert.hpp"

#include <cmath>

#include "simplexflow/errors.hpp"

namespace simplexflow {

HelmertBasis::HelmertBasis(int categories) : categories_(categories) {
  if (categories < 2) throw DimensionError("Helmert basis needs K >= 2");
  const int d = categories - 1;
  matrix_ = Matrix::Zero(d, categories);
  for (int row = 0; row < d; ++row) {
    const double j = row + 1;
    const double scale = 1.0 / std::sqrt(j * (j + 1.0));
    for (int col = 0; col <= row; ++col) matrix_(row, col) = scale;
    matrix_(row, row + 1) = -j * scale;
  }
}

double HelmertBasis::reduced_log_abs_det() const { return -0.5 * std::log(static_cast<double>(categories_)); }

}  // namespace simplexflow
