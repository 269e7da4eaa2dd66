// Command-line front end: train, sample, density, catprobs, experiment, transforms.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "simplexflow/bijections.hpp"
#include "simplexflow/checkpoint.hpp"
#include "simplexflow/config.hpp"
#include "simplexflow/datasets.hpp"
#include "simplexflow/density.hpp"
#include "simplexflow/errors.hpp"
#include "simplexflow/experiment.hpp"
#include "simplexflow/parallel.hpp"
#include "simplexflow/sampler.hpp"
#include "simplexflow/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace simplexflow;

namespace {

constexpr int kUsageStatus = 2;
constexpr int kRuntimeStatus = 1;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;

  int thread_count() const { return threads > 0 ? threads : default_thread_count(); }
};

// Writes to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(g.out);
  const fs::path path = fs::path(g.out) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

fs::path out_dir(const Globals& g) {
  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  return dir;
}

struct LoadedModel {
  VelocityField field;
  FlowModelSpec spec;
};

LoadedModel load_model(const std::string& path) {
  Checkpoint ck = load_checkpoint(path);
  json meta;
  try {
    meta = json::parse(ck.metadata);
  } catch (const json::parse_error& e) {
    throw IoError(path + ": metadata is not JSON");
  }
  if (!meta.contains("model")) throw IoError(path + ": checkpoint has no model description");
  FlowModelSpec spec = model_spec_from_json(meta.at("model"));
  spec.validate();
  if (spec.dim() != ck.field.architecture().dim)
    throw IoError(path + ": model dimension does not match the stored field");
  return {std::move(ck.field), spec};
}

SolverConfig solver_from_flags(const std::string& method, int steps, double atol, double rtol) {
  SolverConfig cfg;
  cfg.method = parse_solver_method(method);
  cfg.steps = steps;
  cfg.atol = atol;
  cfg.rtol = rtol;
  cfg.validate();
  return cfg;
}

DivergenceConfig divergence_from_flag(const std::string& mode, int probes) {
  return divergence_from_json(json{{"mode", mode}, {"probes", probes}});
}

TrainingData load_training_data(const json& data, const FlowModelSpec& model, std::uint64_t seed,
                                json& provenance) {
  const std::string source = data.value("source", "random_categorical");
  const int n = data.value("n", 200000);
  if (n < 1) throw ConfigError("data.n must be positive");
  Rng rng = make_rng(seed, 100);
  provenance = {{"source", source}, {"n", n}};
  if (source == "random_categorical") {
    if (!model.is_discrete) throw ConfigError("random_categorical data needs is_discrete = true");
    if (data.contains("probs")) {
      const auto p = CategoricalDistribution(data.at("probs").get<std::vector<double>>());
      if (p.categories() != model.categories) throw ConfigError("data.probs length must equal categories");
      provenance["probs"] = p.probs();
      return TrainingData::from_labels(sample_categories(p, n, rng), model.categories);
    }
    RandomCategorical rc = gen_random_categorical(model.categories, n, rng);
    provenance["probs"] = rc.probs.probs();
    return TrainingData::from_labels(std::move(rc.data), model.categories);
  }
  if (source == "checkerboard_simplex") {
    if (model.is_discrete || model.categories != 3)
      throw ConfigError("checkerboard_simplex data needs categories = 3 and is_discrete = false");
    const CheckerboardBoard board;
    provenance["board"] = {{"extent", board.extent}, {"cells", board.cells}};
    return TrainingData::from_compositions(gen_checkerboard_simplex(n, rng, board));
  }
  if (source == "file") {
    const std::string path = data.value("path", "");
    if (path.empty()) throw ConfigError("data.path is required for file data");
    provenance["path"] = path;
    if (model.is_discrete) return TrainingData::from_labels(read_categories_csv(path, model.categories), model.categories);
    auto xs = read_compositions_csv(path);
    if (xs.front().categories() != model.categories) throw ConfigError("file compositions do not match categories");
    return TrainingData::from_compositions(std::move(xs));
  }
  throw ConfigError("unknown data source '" + source + "'");
}

int cmd_train(const Globals& g, const std::string& config_path) {
  json doc = read_json_file(config_path);
  if (!doc.is_object()) throw ConfigError("train config must be a JSON object");
  json data_cfg = doc.contains("data") ? doc.at("data") : json::object();
  doc.erase("data");
  TrainConfig cfg = train_config_from_json(doc);
  if (g.seed != 0) cfg.seed = g.seed;
  cfg.threads = g.thread_count();

  json provenance;
  const TrainingData data = load_training_data(data_cfg, cfg.model, cfg.seed, provenance);
  const TrainResult result = train(data, cfg);

  const fs::path dir = out_dir(g);
  const json meta = {{"model", to_json(cfg.model)},
                     {"train", to_json(cfg)},
                     {"data", provenance},
                     {"artifact_version", kArtifactVersion}};
  save_checkpoint(dir / "checkpoint.sxf", result.field, meta.dump());
  const fs::path log_path = dir / "train_log.csv";
  fs::remove(log_path);
  result.log.write_csv(log_path);
  std::cout << "checkpoint " << (dir / "checkpoint.sxf").string() << "\n";
  return 0;
}

int cmd_sample(const Globals& g, const std::string& checkpoint, int n, const SolverConfig& solver,
               bool compositions) {
  const LoadedModel m = load_model(checkpoint);
  const bool want_compositions = compositions || !m.spec.is_discrete;
  const SampleResult s = sample(m.field, m.spec, n, solver, g.seed, {want_compositions, g.thread_count()});
  std::ostringstream out;
  out << std::setprecision(17);
  if (want_compositions) {
    for (int k = 0; k < m.spec.categories; ++k) out << (k ? "," : "") << "x" << k + 1;
    if (m.spec.is_discrete) out << ",category";
    out << '\n';
    for (std::size_t i = 0; i < s.compositions.size(); ++i) {
      const auto& x = s.compositions[i];
      for (int k = 0; k < x.categories(); ++k) out << (k ? "," : "") << x[k];
      if (m.spec.is_discrete) out << ',' << s.categories[i];
      out << '\n';
    }
  } else {
    out << "category\n";
    for (int c : s.categories) out << c << '\n';
  }
  emit(g, "samples.csv", out.str());
  return 0;
}

int cmd_density(const Globals& g, const std::string& checkpoint, const std::string& points,
                const SolverConfig& solver, const DivergenceConfig& div) {
  const LoadedModel m = load_model(checkpoint);
  const auto xs = read_compositions_csv(points);
  if (xs.front().categories() != m.spec.categories) throw IoError(points + ": wrong number of components");
  const Vector logq = log_density_simplex(m.field, m.spec, xs, solver, div, g.seed, g.thread_count());
  const json out = {{"log_density", std::vector<double>(logq.data(), logq.data() + logq.size())},
                    {"solver", to_json(solver)},
                    {"divergence", to_json(div)}};
  emit(g, "density.json", out.dump(2) + "\n");
  return 0;
}

int cmd_catprobs(const Globals& g, const std::string& checkpoint, const SolverConfig& solver,
                 const DivergenceConfig& div) {
  const LoadedModel m = load_model(checkpoint);
  if (!m.spec.is_discrete) throw ConfigError("catprobs needs a model trained on categorical data");
  const CategoricalEstimate est = categorical_probabilities(m.field, m.spec, solver, div, g.seed);
  json records = json::array();
  for (const auto& r : est.records)
    records.push_back({{"category", r.category},
                       {"mu", std::vector<double>(r.mu.values().data(), r.mu.values().data() + r.mu.categories())},
                       {"log_q_theta", r.log_q_theta},
                       {"log_q_component", r.log_q_component},
                       {"p_hat", r.p_hat}});
  const json out = {{"raw", est.raw}, {"normalized", est.normalized.probs()}, {"records", records}};
  emit(g, "catprobs.json", out.dump(2) + "\n");
  return 0;
}

int cmd_experiment(const Globals& g, const std::string& spec_path) {
  ExperimentSpec spec = experiment_from_json(read_json_file(spec_path));
  if (!g.out.empty()) spec.output_dir = g.out;
  if (g.seed != 0) spec.seeds = {g.seed};
  const auto rows = run_experiment(spec, g.thread_count());
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (r.status != "ok") ++failed;
  std::cout << rows.size() << " runs, " << failed << " failed, metrics in "
            << (spec.output_dir / "metrics.csv").string() << "\n";
  return failed == 0 ? 0 : kRuntimeStatus;
}

int cmd_transforms(const Globals& g, const std::string& input, const std::string& kind_name, bool inverse,
                   bool logdet) {
  const BijectionKind kind = parse_bijection_kind(kind_name);
  std::vector<Vector> rows;
  std::vector<std::string> header;
  if (!inverse) {
    const auto xs = read_compositions_csv(input);
    const Bijection phi(kind, xs.front().categories());
    for (const auto& x : xs) {
      const ToEuclidean t = phi.forward(x);
      Vector row(t.z.size() + (logdet ? 1 : 0));
      row.head(t.z.size()) = t.z;
      if (logdet) row[t.z.size()] = t.log_abs_det;
      rows.push_back(std::move(row));
    }
    for (Eigen::Index i = 0; i < rows.front().size() - (logdet ? 1 : 0); ++i) header.push_back("z" + std::to_string(i + 1));
    if (logdet) header.push_back("log_abs_det");
  } else {
    const auto zs = read_vectors_csv(input);
    const int k = static_cast<int>(zs.front().size()) + (kind == BijectionKind::sphere ? 0 : 1);
    const Bijection phi(kind, k);
    for (const auto& z : zs) rows.push_back(phi.inverse(z).values());
    for (int i = 0; i < k; ++i) header.push_back("x" + std::to_string(i + 1));
  }
  std::ostringstream out;
  write_vectors_csv(out, rows, header);
  emit(g, "transformed.csv", out.str());
  return 0;
}

bool is_usage_error(const std::exception& e) {
  return dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e) ||
         dynamic_cast<const DimensionError*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow matching on the probability simplex"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed (0 keeps the config's seed)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--threads", g.threads, "Worker threads (default SIMPLEXFLOW_THREADS or 1)")->check(CLI::NonNegativeNumber);

  std::string sample_method = "euler", density_method = "dopri5", catprobs_method = "dopri5";
  int steps = 300;
  double atol = 1e-6, rtol = 1e-6;
  std::string div_mode = "automatic";
  int probes = 8;
  auto add_solver = [&](CLI::App* cmd, std::string& method) {
    cmd->add_option("--solver", method, "euler or dopri5")->check(CLI::IsMember({"euler", "dopri5"}));
    cmd->add_option("--steps", steps, "Euler steps")->check(CLI::PositiveNumber);
    cmd->add_option("--atol", atol, "dopri5 absolute tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--rtol", rtol, "dopri5 relative tolerance")->check(CLI::PositiveNumber);
  };
  auto add_divergence = [&](CLI::App* cmd) {
    cmd->add_option("--divergence", div_mode, "exact, hutchinson or automatic")
        ->check(CLI::IsMember({"exact", "hutchinson", "automatic"}));
    cmd->add_option("--probes", probes, "Hutchinson probes per trajectory")->check(CLI::PositiveNumber);
  };

  std::string config_path;
  auto* train_cmd = app.add_subcommand("train", "Train a velocity field from a JSON config");
  train_cmd->add_option("config", config_path, "Config JSON")->required()->check(CLI::ExistingFile);

  std::string checkpoint;
  int n = 1000;
  bool compositions = false;
  auto* sample_cmd = app.add_subcommand("sample", "Draw samples from a checkpoint");
  sample_cmd->add_option("checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  sample_cmd->add_option("-n,--count", n, "Number of samples")->check(CLI::PositiveNumber);
  sample_cmd->add_flag("--compositions", compositions, "Also write decoded compositions for discrete models");
  add_solver(sample_cmd, sample_method);

  std::string points;
  auto* density_cmd = app.add_subcommand("density", "Log density of compositions under a checkpoint");
  density_cmd->add_option("checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  density_cmd->add_option("points", points, "CSV of compositions")->required()->check(CLI::ExistingFile);
  add_solver(density_cmd, density_method);
  add_divergence(density_cmd);

  auto* catprobs_cmd = app.add_subcommand("catprobs", "Categorical probabilities from a checkpoint");
  catprobs_cmd->add_option("checkpoint", checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  add_solver(catprobs_cmd, catprobs_method);
  add_divergence(catprobs_cmd);

  std::string spec_path;
  auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment grid");
  experiment_cmd->add_option("experiment", spec_path, "Experiment JSON")->required()->check(CLI::ExistingFile);

  std::string input, bijection = "ilr";
  bool inverse = false, logdet = false;
  auto* transforms_cmd = app.add_subcommand("transforms", "Apply a simplex bijection to a CSV");
  transforms_cmd->add_option("input", input, "CSV of compositions (or Euclidean rows with --inverse)")
      ->required()
      ->check(CLI::ExistingFile);
  transforms_cmd->add_option("--bijection", bijection, "ilr, sb, alr, mlr or sphere")
      ->check(CLI::IsMember({"ilr", "sb", "alr", "mlr", "sphere"}));
  transforms_cmd->add_flag("--inverse", inverse, "Map rows back to the simplex");
  transforms_cmd->add_flag("--logdet", logdet, "Append the log Jacobian determinant column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << "\n" << app.help();
    return kUsageStatus;
  }

  try {
    if (*train_cmd) return cmd_train(g, config_path);
    if (*sample_cmd) return cmd_sample(g, checkpoint, n, solver_from_flags(sample_method, steps, atol, rtol), compositions);
    if (*density_cmd)
      return cmd_density(g, checkpoint, points, solver_from_flags(density_method, steps, atol, rtol),
                         divergence_from_flag(div_mode, probes));
    if (*catprobs_cmd)
      return cmd_catprobs(g, checkpoint, solver_from_flags(catprobs_method, steps, atol, rtol),
                          divergence_from_flag(div_mode, probes));
    if (*experiment_cmd) return cmd_experiment(g, spec_path);
    if (*transforms_cmd) return cmd_transforms(g, input, bijection, inverse, logdet);
  } catch (const std::exception& e) {
    if (is_usage_error(e)) {
      std::cerr << "error: usage: " << e.what() << "\n";
      return kUsageStatus;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeStatus;
  }
  return kUsageStatus;
}
