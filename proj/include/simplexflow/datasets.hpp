#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "simplexflow/categorical.hpp"
#include "simplexflow/composition.hpp"
#include "simplexflow/dirichlet.hpp"

namespace simplexflow {

// cells x cells board over [-extent, extent]^2. Cell (i, j) counts from the
// lower-left corner; it is dark when i + j is even.
struct CheckerboardBoard {
  double extent = 4.0;
  int cells = 4;

  bool dark(double u, double v) const;
};

// Uniform points on the dark cells pushed to the simplex (K = 3) through the
// inverse stick-breaking map.
std::vector<Composition> gen_checkerboard_simplex(int n, Rng& rng, const CheckerboardBoard& board = {});

// Whether the stick-breaking pullback of x lands in a dark cell.
bool checkerboard_member(const Composition& x, const CheckerboardBoard& board = {});
double checkerboard_invalid_fraction(const std::vector<Composition>& samples, const CheckerboardBoard& board = {});

struct RandomCategorical {
  CategoricalDistribution probs;
  std::vector<int> data;
};

// p_1 = 1/2, (p_2, ..., p_K) = 1/2 * Dir(1, ..., 1); n labels drawn i.i.d. from p.
RandomCategorical gen_random_categorical(int categories, int n, Rng& rng);
std::vector<int> sample_categories(const CategoricalDistribution& p, int n, Rng& rng);

// Plain CSV, one row per record, optional header line of non-numeric text.
// Rows failing validation raise IoError naming the line number.
std::vector<Composition> read_compositions_csv(const std::filesystem::path& path);
std::vector<int> read_categories_csv(const std::filesystem::path& path, int categories);
void write_compositions_csv(const std::filesystem::path& path, const std::vector<Composition>& xs);
void write_categories_csv(const std::filesystem::path& path, const std::vector<int>& labels);

// Rows of reals with a common width.
std::vector<Vector> read_vectors_csv(const std::filesystem::path& path);
void write_vectors_csv(std::ostream& out, const std::vector<Vector>& rows, const std::vector<std::string>& header);

}  // namespace simplexflow
