#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "simplexflow/adam.hpp"
#include "simplexflow/coordinates.hpp"
#include "simplexflow/coupling.hpp"
#include "simplexflow/divergence.hpp"
#include "simplexflow/solver.hpp"

namespace simplexflow {

inline constexpr const char* kArtifactVersion = "simplexflow-0.1.0";

enum class ExperimentTag { checkerboard, scalability, estimator_accuracy, param_ablation };

std::string_view to_string(ExperimentTag tag);
ExperimentTag parse_experiment_tag(std::string_view name);

struct GridPoint {
  int categories = 2;
  MapKind map = MapKind::ilr;
  CouplingKind coupling = CouplingKind::independent;
  InterpolationConfig interpolation;
};

// Shared budget for every grid point.
struct ExperimentBudget {
  long steps = 5000;
  int batch_size = 256;
  std::vector<int> hidden{256, 256, 256};
  int embed_dim = 64;
  AdamConfig optimizer{1e-3};
  int train_samples = 200000;
  int eval_samples = 20000;
  SolverConfig solver;
  // Categorical estimator at the mean compositions (discrete experiments only).
  bool run_estimator = false;
  SolverConfig density_solver;
  DivergenceConfig divergence;
};

struct ExperimentSpec {
  ExperimentTag tag = ExperimentTag::scalability;
  std::vector<GridPoint> grid;
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir = "experiment_out";
  ExperimentBudget budget;
  // Scalability grids use powers of two up to this ceiling.
  int max_categories = 512;

  void validate() const;
};

inline constexpr double kNotComputed = std::numeric_limits<double>::quiet_NaN();

struct ExperimentRow {
  int index = 0;
  std::uint64_t seed = 0;
  GridPoint point;
  std::string status = "ok";
  double kl = kNotComputed;
  double tv = kNotComputed;
  double invalid_fraction = kNotComputed;
  double estimator_kl = kNotComputed;
  double estimator_p1 = kNotComputed;
  double sampled_p1 = kNotComputed;
  double true_p1 = kNotComputed;
  double final_loss = kNotComputed;
};

// Header of metrics.csv, fixed.
std::string metrics_csv_header();
std::string metrics_csv_row(ExperimentRow const& row);

// Trains and evaluates every (grid point, seed) pair. Pairs run on up to
// `threads` workers with seeds derived from (seed, index). Writes
// points/<index>_<seed>.csv, metrics.csv and manifest.json under output_dir.
// A failing pair is recorded in its row's status and the run continues.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, int threads = 1);

// Runs a single pair; exposed for tests.
ExperimentRow run_grid_point(const ExperimentSpec& spec, int index, std::uint64_t seed, int threads = 1);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace simplexflow
