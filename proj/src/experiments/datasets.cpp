#include "simplexflow/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "simplexflow/bijections.hpp"
#include "simplexflow/errors.hpp"

namespace simplexflow {

bool CheckerboardBoard::dark(double u, double v) const {
  const double size = 2.0 * extent / cells;
  const double fi = std::floor((u + extent) / size);
  const double fj = std::floor((v + extent) / size);
  if (!(fi >= 0 && fi < cells && fj >= 0 && fj < cells)) return false;
  return (static_cast<int>(fi) + static_cast<int>(fj)) % 2 == 0;
}

std::vector<Composition> gen_checkerboard_simplex(int n, Rng& rng, const CheckerboardBoard& board) {
  if (n < 1) throw ConfigError("checkerboard sample count must be >= 1");
  std::vector<std::pair<int, int>> dark_cells;
  for (int i = 0; i < board.cells; ++i)
    for (int j = 0; j < board.cells; ++j)
      if ((i + j) % 2 == 0) dark_cells.emplace_back(i, j);
  const double size = 2.0 * board.extent / board.cells;
  std::uniform_int_distribution<std::size_t> pick(0, dark_cells.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Composition> out;
  out.reserve(n);
  for (int s = 0; s < n; ++s) {
    const auto [i, j] = dark_cells[pick(rng)];
    Vector z(2);
    z[0] = -board.extent + (i + unit(rng)) * size;
    z[1] = -board.extent + (j + unit(rng)) * size;
    out.push_back(stick_breaking_inv(z));
  }
  return out;
}

bool checkerboard_member(const Composition& x, const CheckerboardBoard& board) {
  if (x.categories() != 3) throw DimensionError("checkerboard membership needs K = 3");
  const Vector z = stick_breaking(x).z;
  return board.dark(z[0], z[1]);
}

double checkerboard_invalid_fraction(const std::vector<Composition>& samples, const CheckerboardBoard& board) {
  if (samples.empty()) throw DimensionError("no samples");
  std::size_t invalid = 0;
  for (const auto& x : samples)
    if (!checkerboard_member(x, board)) ++invalid;
  return static_cast<double>(invalid) / static_cast<double>(samples.size());
}

std::vector<int> sample_categories(const CategoricalDistribution& p, int n, Rng& rng) {
  std::vector<double> cdf(p.categories());
  double acc = 0.0;
  for (int k = 0; k < p.categories(); ++k) cdf[k] = (acc += p[k]);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) {
    const double u = unit(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out[i] = std::min(static_cast<int>(it - cdf.begin()), p.categories() - 1);
  }
  return out;
}

RandomCategorical gen_random_categorical(int categories, int n, Rng& rng) {
  if (categories < 2) throw DimensionError("random categorical needs K >= 2");
  std::vector<double> probs(categories, 0.5);
  if (categories > 2) {
    const Composition rest = sample_symmetric_dirichlet(1.0, categories - 1, rng);
    for (int k = 1; k < categories; ++k) probs[k] = 0.5 * rest[k - 1];
  }
  CategoricalDistribution p = CategoricalDistribution::from_weights(std::move(probs));
  auto data = sample_categories(p, n, rng);
  return {std::move(p), std::move(data)};
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) fields.push_back(item);
  return fields;
}

bool looks_numeric(const std::string& s) {
  const auto pos = s.find_first_not_of(" \t");
  if (pos == std::string::npos) return false;
  const char c = s[pos];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (s.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line) + ": cannot parse number '" + s + "'");
  }
}

template <typename RowFn>
void for_each_row(const std::filesystem::path& path, RowFn&& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (number == 1 && !looks_numeric(line)) continue;  // header
    fn(split(line), number);
  }
}

}  // namespace

std::vector<Composition> read_compositions_csv(const std::filesystem::path& path) {
  std::vector<Composition> out;
  for_each_row(path, [&](const std::vector<std::string>& fields, std::size_t line) {
    Vector x(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) x[static_cast<Eigen::Index>(i)] = parse_double(fields[i], line);
    if (!out.empty() && x.size() != out.front().categories())
      throw IoError("line " + std::to_string(line) + ": expected " + std::to_string(out.front().categories()) +
                    " components");
    try {
      out.emplace_back(std::move(x));
    } catch (const std::exception& e) {
      throw IoError("line " + std::to_string(line) + ": " + e.what());
    }
  });
  if (out.empty()) throw IoError(path.string() + " contains no compositions");
  return out;
}

std::vector<int> read_categories_csv(const std::filesystem::path& path, int categories) {
  std::vector<int> out;
  for_each_row(path, [&](const std::vector<std::string>& fields, std::size_t line) {
    if (fields.size() != 1) throw IoError("line " + std::to_string(line) + ": expected a single category index");
    const double v = parse_double(fields[0], line);
    if (v != std::floor(v) || v < 0 || v >= categories)
      throw IoError("line " + std::to_string(line) + ": category index out of range [0, " +
                    std::to_string(categories) + ")");
    out.push_back(static_cast<int>(v));
  });
  if (out.empty()) throw IoError(path.string() + " contains no categories");
  return out;
}

void write_compositions_csv(const std::filesystem::path& path, const std::vector<Composition>& xs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << std::setprecision(17);
  if (!xs.empty()) {
    for (int k = 0; k < xs.front().categories(); ++k) out << (k ? "," : "") << "x" << k + 1;
    out << '\n';
  }
  for (const auto& x : xs) {
    for (int k = 0; k < x.categories(); ++k) out << (k ? "," : "") << x[k];
    out << '\n';
  }
}

std::vector<Vector> read_vectors_csv(const std::filesystem::path& path) {
  std::vector<Vector> out;
  for_each_row(path, [&](const std::vector<std::string>& fields, std::size_t line) {
    Vector v(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(fields[i], line);
    if (!out.empty() && v.size() != out.front().size())
      throw IoError("line " + std::to_string(line) + ": expected " + std::to_string(out.front().size()) + " columns");
    out.push_back(std::move(v));
  });
  if (out.empty()) throw IoError(path.string() + " contains no rows");
  return out;
}

void write_vectors_csv(std::ostream& out, const std::vector<Vector>& rows, const std::vector<std::string>& header) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  if (!header.empty()) out << '\n';
  for (const auto& r : rows) {
    for (Eigen::Index i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

void write_categories_csv(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << "category\n";
  for (int c : labels) out << c << '\n';
}

}  // namespace simplexflow
