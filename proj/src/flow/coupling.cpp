#include "simplexflow/coupling.hpp"

#include <limits>
#include <string>

#include "simplexflow/errors.hpp"

namespace simplexflow {

std::string_view to_string(CouplingKind kind) {
  return kind == CouplingKind::independent ? "independent" : "minibatch_ot";
}

CouplingKind parse_coupling_kind(std::string_view name) {
  if (name == "independent") return CouplingKind::independent;
  if (name == "minibatch_ot" || name == "ot") return CouplingKind::minibatch_ot;
  throw ConfigError("unknown coupling '" + std::string(name) + "'");
}

PairedBatch couple_independent(Matrix z0, Matrix z1) {
  if (z0.rows() != z1.rows() || z0.cols() != z1.cols()) throw DimensionError("coupling: batch shapes differ");
  return {std::move(z0), std::move(z1)};
}

std::vector<int> solve_assignment(const Matrix& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DimensionError("assignment cost matrix must be square");
  if (n == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Shortest augmenting paths with row potentials u and column potentials v.
  // Index 0 is a sentinel column; rows and columns are 1-based internally.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int col0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const int i0 = match[col0];
      double delta = inf;
      int col1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = col0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const int col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<int> assignment(n);
  for (int j = 1; j <= n; ++j) assignment[match[j] - 1] = j - 1;
  return assignment;
}

PairedBatch couple_minibatch_ot(const Matrix& z0, const Matrix& z1) {
  if (z0.rows() != z1.rows() || z0.cols() != z1.cols()) throw DimensionError("coupling: batch shapes differ");
  const Eigen::Index n = z1.cols();
  if (n > kMaxAssignmentSize) throw DimensionError("minibatch OT supports at most 1024 pairs");
  // cost(i, j) = ||z1_i - z0_j||^2
  const Vector sq0 = z0.colwise().squaredNorm().transpose();
  const Vector sq1 = z1.colwise().squaredNorm().transpose();
  Matrix cost = -2.0 * z1.transpose() * z0;
  cost.colwise() += sq1;
  cost.rowwise() += sq0.transpose();
  const auto sigma = solve_assignment(cost);
  Matrix reordered(z0.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) reordered.col(i) = z0.col(sigma[i]);
  return {std::move(reordered), z1};
}

PairedBatch couple(CouplingKind kind, Matrix z0, Matrix z1) {
  if (kind == CouplingKind::minibatch_ot) return couple_minibatch_ot(z0, z1);
  return couple_independent(std::move(z0), std::move(z1));
}

double pairing_cost(const PairedBatch& batch) { return (batch.z0 - batch.z1).squaredNorm(); }

}  // namespace simplexflow
