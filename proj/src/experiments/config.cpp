#include "simplexflow/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "simplexflow/errors.hpp"

namespace simplexflow {

using nlohmann::json;

namespace {

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  if (!j.is_object()) throw ConfigError("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

const json& object_or_empty(const json& j, const char* key) {
  static const json empty = json::object();
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return empty;
  if (!it->is_object()) throw ConfigError(std::string("config key '") + key + "' must be an object");
  return *it;
}

std::string string_or(const json& j, const char* key, std::string_view fallback) {
  return value_or<std::string>(j, key, std::string(fallback));
}

// alpha may be numeric, or "inf" for the deterministic limit.
void read_alpha(const json& value, InterpolationConfig& cfg) {
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s != "inf" && s != "infinity") throw ConfigError("alpha must be a number or \"inf\"");
    cfg.deterministic = true;
    return;
  }
  if (!value.is_number()) throw ConfigError("alpha must be a number or \"inf\"");
  cfg.alpha = value.get<double>();
  if (std::isinf(cfg.alpha)) cfg.deterministic = true;
}

json alpha_json(const InterpolationConfig& cfg) {
  if (cfg.deterministic) return "inf";
  return cfg.alpha;
}

}  // namespace

InterpolationConfig interpolation_from_json(const json& j) {
  InterpolationConfig cfg;
  cfg.lambda = value_or(j, "lambda", cfg.lambda);
  if (j.contains("alpha")) read_alpha(j.at("alpha"), cfg);
  cfg.deterministic = value_or(j, "deterministic", cfg.deterministic);
  cfg.scaling = value_or(j, "scaling", cfg.scaling);
  return cfg;
}

json to_json(const InterpolationConfig& cfg) {
  return {{"lambda", cfg.lambda}, {"alpha", alpha_json(cfg)}, {"deterministic", cfg.deterministic},
          {"scaling", cfg.scaling}};
}

FlowModelSpec model_spec_from_json(const json& j) {
  FlowModelSpec spec;
  spec.map = parse_map_kind(string_or(j, "bijection", to_string(spec.map)));
  spec.categories = value_or(j, "categories", spec.categories);
  spec.interpolation = interpolation_from_json(object_or_empty(j, "interpolation"));
  spec.base = parse_base_kind(string_or(j, "base", to_string(spec.base)));
  spec.is_discrete = value_or(j, "is_discrete", spec.is_discrete);
  return spec;
}

json to_json(const FlowModelSpec& spec) {
  return {{"bijection", to_string(spec.map)},
          {"categories", spec.categories},
          {"interpolation", to_json(spec.interpolation)},
          {"base", to_string(spec.base)},
          {"is_discrete", spec.is_discrete}};
}

AdamConfig adam_from_json(const json& j) {
  AdamConfig cfg;
  cfg.learning_rate = value_or(j, "lr", cfg.learning_rate);
  cfg.beta1 = value_or(j, "beta1", cfg.beta1);
  cfg.beta2 = value_or(j, "beta2", cfg.beta2);
  cfg.epsilon = value_or(j, "epsilon", cfg.epsilon);
  cfg.weight_decay = value_or(j, "weight_decay", cfg.weight_decay);
  cfg.schedule = parse_lr_schedule(string_or(j, "schedule", std::string(to_string(cfg.schedule))));
  return cfg;
}

json to_json(const AdamConfig& cfg) {
  return {{"lr", cfg.learning_rate},
          {"beta1", cfg.beta1},
          {"beta2", cfg.beta2},
          {"epsilon", cfg.epsilon},
          {"weight_decay", cfg.weight_decay},
          {"schedule", to_string(cfg.schedule)}};
}

TrainConfig train_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  TrainConfig cfg;
  cfg.model = model_spec_from_json(j);
  cfg.coupling = parse_coupling_kind(string_or(j, "coupling", to_string(cfg.coupling)));
  cfg.batch_size = value_or(j, "batch_size", cfg.batch_size);
  cfg.steps = value_or(j, "steps", cfg.steps);
  cfg.optimizer = adam_from_json(object_or_empty(j, "optimizer"));
  cfg.seed = value_or<std::uint64_t>(j, "seed", cfg.seed);
  const json& net = object_or_empty(j, "network");
  cfg.hidden = value_or(net, "hidden", cfg.hidden);
  cfg.embed_dim = value_or(net, "embed_dim", cfg.embed_dim);
  cfg.activation = parse_activation(string_or(net, "activation", to_string(cfg.activation)));
  cfg.threads = value_or(j, "threads", cfg.threads);
  cfg.validate();
  return cfg;
}

json to_json(const TrainConfig& cfg) {
  json j = to_json(cfg.model);
  j["coupling"] = to_string(cfg.coupling);
  j["batch_size"] = cfg.batch_size;
  j["steps"] = cfg.steps;
  j["optimizer"] = to_json(cfg.optimizer);
  j["seed"] = cfg.seed;
  j["network"] = {{"hidden", cfg.hidden}, {"embed_dim", cfg.embed_dim}, {"activation", to_string(cfg.activation)}};
  return j;
}

SolverConfig solver_from_json(const json& j) {
  SolverConfig cfg;
  cfg.method = parse_solver_method(string_or(j, "method", to_string(cfg.method)));
  cfg.steps = value_or(j, "steps", cfg.steps);
  cfg.atol = value_or(j, "atol", cfg.atol);
  cfg.rtol = value_or(j, "rtol", cfg.rtol);
  cfg.max_steps = value_or(j, "max_steps", cfg.max_steps);
  cfg.validate();
  return cfg;
}

json to_json(const SolverConfig& cfg) {
  return {{"method", to_string(cfg.method)},
          {"steps", cfg.steps},
          {"atol", cfg.atol},
          {"rtol", cfg.rtol},
          {"max_steps", cfg.max_steps}};
}

DivergenceConfig divergence_from_json(const json& j) {
  DivergenceConfig cfg;
  const auto mode = string_or(j, "mode", "automatic");
  if (mode == "exact")
    cfg.mode = DivergenceMode::exact;
  else if (mode == "hutchinson")
    cfg.mode = DivergenceMode::hutchinson;
  else if (mode == "automatic")
    cfg.mode = DivergenceMode::automatic;
  else
    throw ConfigError("unknown divergence mode '" + mode + "'");
  cfg.probes = value_or(j, "probes", cfg.probes);
  cfg.validate();
  return cfg;
}

json to_json(const DivergenceConfig& cfg) {
  const char* mode = cfg.mode == DivergenceMode::exact        ? "exact"
                     : cfg.mode == DivergenceMode::hutchinson ? "hutchinson"
                                                               : "automatic";
  return {{"mode", mode}, {"probes", cfg.probes}};
}

namespace {

GridPoint grid_point_from_json(const json& j) {
  GridPoint p;
  p.categories = value_or(j, "categories", p.categories);
  p.map = parse_map_kind(string_or(j, "bijection", to_string(p.map)));
  p.coupling = parse_coupling_kind(string_or(j, "coupling", to_string(p.coupling)));
  p.interpolation = interpolation_from_json(j.contains("interpolation") ? j.at("interpolation") : j);
  return p;
}

json to_json(const GridPoint& p) {
  return {{"categories", p.categories},
          {"bijection", to_string(p.map)},
          {"coupling", to_string(p.coupling)},
          {"interpolation", to_json(p.interpolation)}};
}

template <typename T>
std::vector<T> list_or(const json& grid, const char* key, std::vector<T> fallback) {
  return value_or(grid, key, std::move(fallback));
}

std::vector<GridPoint> expand_grid(const json& g) {
  const auto ks = list_or<int>(g, "categories", {2});
  const auto maps = list_or<std::string>(g, "bijection", {"ilr"});
  const auto couplings = list_or<std::string>(g, "coupling", {"independent"});
  const auto lambdas = list_or<double>(g, "lambda", {0.5});
  const auto scalings = list_or<bool>(g, "scaling", {false});
  std::vector<json> alphas{100.0};
  if (g.contains("alpha")) {
    if (!g.at("alpha").is_array()) throw ConfigError("grid 'alpha' must be a list");
    alphas = g.at("alpha").get<std::vector<json>>();
  }
  std::vector<GridPoint> out;
  for (int k : ks)
    for (const auto& m : maps)
      for (const auto& c : couplings)
        for (double lambda : lambdas)
          for (const auto& a : alphas)
            for (bool scaling : scalings) {
              GridPoint p;
              p.categories = k;
              p.map = parse_map_kind(m);
              p.coupling = parse_coupling_kind(c);
              p.interpolation.lambda = lambda;
              read_alpha(a, p.interpolation);
              p.interpolation.scaling = scaling;
              out.push_back(p);
            }
  return out;
}

}  // namespace

ExperimentSpec experiment_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentSpec spec;
  spec.tag = parse_experiment_tag(string_or(j, "experiment", to_string(spec.tag)));
  if (j.contains("points")) {
    if (!j.at("points").is_array()) throw ConfigError("'points' must be a list");
    for (const auto& p : j.at("points")) spec.grid.push_back(grid_point_from_json(p));
  }
  if (j.contains("grid")) {
    auto expanded = expand_grid(j.at("grid"));
    spec.grid.insert(spec.grid.end(), expanded.begin(), expanded.end());
  }
  spec.seeds = value_or(j, "seeds", spec.seeds);
  spec.output_dir = string_or(j, "output_dir", spec.output_dir.string());
  const json& b = object_or_empty(j, "budget");
  auto& budget = spec.budget;
  budget.steps = value_or(b, "steps", budget.steps);
  budget.batch_size = value_or(b, "batch_size", budget.batch_size);
  budget.hidden = value_or(b, "hidden", budget.hidden);
  budget.embed_dim = value_or(b, "embed_dim", budget.embed_dim);
  if (b.contains("optimizer")) budget.optimizer = adam_from_json(b.at("optimizer"));
  budget.train_samples = value_or(b, "train_samples", budget.train_samples);
  budget.eval_samples = value_or(b, "eval_samples", budget.eval_samples);
  if (b.contains("solver")) budget.solver = solver_from_json(b.at("solver"));
  budget.run_estimator = value_or(b, "run_estimator", budget.run_estimator);
  if (b.contains("density_solver")) budget.density_solver = solver_from_json(b.at("density_solver"));
  if (b.contains("divergence")) budget.divergence = divergence_from_json(b.at("divergence"));
  spec.max_categories = value_or(j, "max_categories", spec.max_categories);
  spec.validate();
  return spec;
}

json to_json(const ExperimentSpec& spec) {
  json points = json::array();
  for (const auto& p : spec.grid) points.push_back(to_json(p));
  const auto& b = spec.budget;
  return {{"experiment", to_string(spec.tag)},
          {"points", points},
          {"seeds", spec.seeds},
          {"max_categories", spec.max_categories},
          {"budget",
           {{"steps", b.steps},
            {"batch_size", b.batch_size},
            {"hidden", b.hidden},
            {"embed_dim", b.embed_dim},
            {"optimizer", to_json(b.optimizer)},
            {"train_samples", b.train_samples},
            {"eval_samples", b.eval_samples},
            {"solver", to_json(b.solver)},
            {"run_estimator", b.run_estimator},
            {"density_solver", to_json(b.density_solver)},
            {"divergence", to_json(b.divergence)}}}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::uint64_t config_hash(const json& j) {
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace simplexflow
