#pragma once

#include <string_view>
#include <vector>

#include "simplexflow/composition.hpp"

namespace simplexflow {

enum class CouplingKind { independent, minibatch_ot };

std::string_view to_string(CouplingKind kind);
CouplingKind parse_coupling_kind(std::string_view name);

// Column i of z0 is paired with column i of z1.
struct PairedBatch {
  Matrix z0;
  Matrix z1;
};

inline constexpr int kMaxAssignmentSize = 1024;

// Identity pairing of two independently drawn batches.
PairedBatch couple_independent(Matrix z0, Matrix z1);

// Exact square assignment (Hungarian method with potentials). Returns
// assignment[row] = column minimising sum cost(row, assignment[row]).
// Ties resolve to the lowest column index reached first by the scan.
std::vector<int> solve_assignment(const Matrix& cost);

// Reorders z0 so that sum_i ||z0[sigma(i)] - z1[i]||^2 is minimal.
PairedBatch couple_minibatch_ot(const Matrix& z0, const Matrix& z1);

PairedBatch couple(CouplingKind kind, Matrix z0, Matrix z1);

// sum_i ||z0_i - z1_i||^2 of a pairing.
double pairing_cost(const PairedBatch& batch);

}  // namespace simplexflow
