#include "simplexflow/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "simplexflow/config.hpp"
#include "simplexflow/datasets.hpp"
#include "simplexflow/density.hpp"
#include "simplexflow/errors.hpp"
#include "simplexflow/linear_fm.hpp"
#include "simplexflow/metrics.hpp"
#include "simplexflow/parallel.hpp"
#include "simplexflow/sampler.hpp"
#include "simplexflow/trainer.hpp"

namespace simplexflow {

namespace {

constexpr std::string_view kTagNames[] = {"checkerboard", "scalability", "estimator_accuracy", "param_ablation"};

bool power_of_two(int k) { return k >= 2 && (k & (k - 1)) == 0; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string alpha_text(const InterpolationConfig& cfg) {
  return cfg.deterministic ? "inf" : format_double(cfg.alpha);
}

TrainConfig train_config_for(const ExperimentSpec& spec, const GridPoint& point, std::uint64_t seed, int threads) {
  const auto& b = spec.budget;
  TrainConfig cfg;
  cfg.model.map = point.map;
  cfg.model.categories = point.categories;
  cfg.model.interpolation = point.interpolation;
  cfg.model.is_discrete = spec.tag != ExperimentTag::checkerboard;
  cfg.coupling = point.coupling;
  cfg.batch_size = b.batch_size;
  cfg.steps = b.steps;
  cfg.optimizer = b.optimizer;
  cfg.seed = seed;
  cfg.hidden = b.hidden;
  cfg.embed_dim = b.embed_dim;
  cfg.threads = threads;
  if (point.map == MapKind::linear) cfg = linear_fm_config(cfg);
  return cfg;
}

void run_checkerboard(const ExperimentSpec& spec, const GridPoint& point, std::uint64_t seed, int threads,
                      ExperimentRow& row) {
  Rng data_rng = make_rng(seed, 100);
  const auto data = gen_checkerboard_simplex(spec.budget.train_samples, data_rng);
  const TrainConfig cfg = train_config_for(spec, point, seed, threads);
  const TrainResult trained = train(TrainingData::from_compositions(data), cfg);
  row.final_loss = trained.log.loss.empty() ? kNotComputed : trained.log.loss.back();
  const SampleResult s =
      sample(trained.field, cfg.model, spec.budget.eval_samples, spec.budget.solver, seed + 1, {true, threads});
  row.invalid_fraction = checkerboard_invalid_fraction(s.compositions);
}

void run_discrete(const ExperimentSpec& spec, const GridPoint& point, std::uint64_t seed, int threads,
                  ExperimentRow& row) {
  Rng data_rng = make_rng(seed, 100);
  const RandomCategorical truth = gen_random_categorical(point.categories, spec.budget.train_samples, data_rng);
  const TrainConfig cfg = train_config_for(spec, point, seed, threads);
  const TrainResult trained = train(TrainingData::from_labels(truth.data, point.categories), cfg);
  row.final_loss = trained.log.loss.empty() ? kNotComputed : trained.log.loss.back();

  const SampleResult s =
      sample(trained.field, cfg.model, spec.budget.eval_samples, spec.budget.solver, seed + 1, {false, threads});
  const auto m = eval_metrics(truth.probs, s.categories);
  row.kl = m.kl;
  row.tv = m.tv;
  row.true_p1 = truth.probs[0];
  row.sampled_p1 = static_cast<double>(std::count(s.categories.begin(), s.categories.end(), 0)) /
                   static_cast<double>(s.categories.size());

  const bool estimator_defined = !point.interpolation.deterministic && point.map != MapKind::linear;
  if (spec.budget.run_estimator && estimator_defined) {
    const CategoricalEstimate est = categorical_probabilities(trained.field, cfg.model, spec.budget.density_solver,
                                                              spec.budget.divergence, seed + 2);
    row.estimator_kl = eval_metrics(truth.probs, est.normalized).kl;
    row.estimator_p1 = est.raw[0];
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view to_string(ExperimentTag tag) { return kTagNames[static_cast<int>(tag)]; }

ExperimentTag parse_experiment_tag(std::string_view name) {
  for (int i = 0; i < 4; ++i)
    if (kTagNames[i] == name) return static_cast<ExperimentTag>(i);
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

void ExperimentSpec::validate() const {
  if (grid.empty()) throw ConfigError("experiment grid is empty");
  if (seeds.empty()) throw ConfigError("experiment needs at least one seed");
  if (budget.steps < 1 || budget.batch_size < 1) throw ConfigError("budget steps and batch_size must be positive");
  if (budget.train_samples < 1 || budget.eval_samples < 1) throw ConfigError("budget sample counts must be positive");
  for (const auto& p : grid) {
    p.interpolation.validate();
    if (tag == ExperimentTag::checkerboard) {
      if (p.categories != 3) throw ConfigError("checkerboard grid points need categories = 3");
    } else {
      if (p.categories < 2) throw ConfigError("categories must be at least 2");
      if (p.map == MapKind::linear) throw ConfigError("LinearFM is only supported for the checkerboard experiment");
    }
    if (tag == ExperimentTag::scalability && (!power_of_two(p.categories) || p.categories > max_categories))
      throw ConfigError("scalability categories must be powers of two up to " + std::to_string(max_categories));
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over a combination of both inputs.
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ull + index + 0x632BE59BD9B4E019ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string metrics_csv_header() {
  return "index,seed,categories,bijection,coupling,lambda,alpha,scaling,status,kl,tv,invalid_fraction,"
         "estimator_kl,estimator_p1,sampled_p1,true_p1,final_loss";
}

std::string metrics_csv_row(const ExperimentRow& row) {
  std::ostringstream s;
  const auto& p = row.point;
  std::string status = row.status;
  std::replace(status.begin(), status.end(), ',', ';');
  std::replace(status.begin(), status.end(), '\n', ' ');
  s << row.index << ',' << row.seed << ',' << p.categories << ',' << to_string(p.map) << ','
    << to_string(p.coupling) << ',' << format_double(p.interpolation.lambda) << ',' << alpha_text(p.interpolation)
    << ',' << (p.interpolation.scaling ? 1 : 0) << ',' << status << ',' << format_double(row.kl) << ','
    << format_double(row.tv) << ',' << format_double(row.invalid_fraction) << ',' << format_double(row.estimator_kl)
    << ',' << format_double(row.estimator_p1) << ',' << format_double(row.sampled_p1) << ','
    << format_double(row.true_p1) << ',' << format_double(row.final_loss);
  return s.str();
}

ExperimentRow run_grid_point(const ExperimentSpec& spec, int index, std::uint64_t seed, int threads) {
  if (index < 0 || index >= static_cast<int>(spec.grid.size())) throw ConfigError("grid index out of range");
  ExperimentRow row;
  row.index = index;
  row.seed = seed;
  row.point = spec.grid[index];
  const std::uint64_t derived = derive_seed(seed, static_cast<std::uint64_t>(index));
  try {
    if (spec.tag == ExperimentTag::checkerboard)
      run_checkerboard(spec, row.point, derived, threads, row);
    else
      run_discrete(spec, row.point, derived, threads, row);
  } catch (const std::exception& e) {
    row.status = std::string("failed: ") + e.what();
  }
  return row;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const std::size_t points = spec.grid.size();
  const std::size_t pairs = points * spec.seeds.size();
  std::vector<ExperimentRow> rows(pairs);

  const auto point_dir = spec.output_dir / "points";
  std::filesystem::create_directories(point_dir);

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(pairs)));
  const int inner = std::max(1, threads / workers);
  parallel_for(pairs, workers, [&](std::size_t i) {
    const int index = static_cast<int>(i % points);
    const std::uint64_t seed = spec.seeds[i / points];
    rows[i] = run_grid_point(spec, index, seed, inner);
    write_text(point_dir / (std::to_string(index) + "_" + std::to_string(seed) + ".csv"),
               metrics_csv_header() + "\n" + metrics_csv_row(rows[i]) + "\n");
  });

  std::string merged = metrics_csv_header() + "\n";
  for (const auto& row : rows) merged += metrics_csv_row(row) + "\n";
  write_text(spec.output_dir / "metrics.csv", merged);

  const nlohmann::json config = to_json(spec);
  nlohmann::json derived = nlohmann::json::array();
  std::size_t failures = 0;
  for (const auto& row : rows) {
    derived.push_back({{"index", row.index},
                       {"seed", row.seed},
                       {"derived_seed", derive_seed(row.seed, static_cast<std::uint64_t>(row.index))}});
    if (row.status != "ok") ++failures;
  }
  const CheckerboardBoard board;
  nlohmann::json manifest = {{"artifact_version", kArtifactVersion},
                             {"config_hash", hex64(config_hash(config))},
                             {"config", config},
                             {"seeds", spec.seeds},
                             {"runs", derived},
                             {"failures", failures}};
  if (spec.tag == ExperimentTag::checkerboard)
    manifest["checkerboard"] = {{"extent", board.extent}, {"cells", board.cells}, {"dark_cells", "(i + j) even"}};
  write_text(spec.output_dir / "manifest.json", manifest.dump(2) + "\n");
  return rows;
}

}  // namespace simplexflow
