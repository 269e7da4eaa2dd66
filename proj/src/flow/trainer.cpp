#include "simplexflow/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

#include "simplexflow/cfm.hpp"
#include "simplexflow/errors.hpp"
#include "simplexflow/path.hpp"

namespace simplexflow {
namespace {
// Every this many steps one pair of the minibatch is re-derived through
// linear_path and checked against the batched path arithmetic.
constexpr long kPathCheckInterval = 97;
}  // namespace

void TrainConfig::validate() const {
  model.validate();
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (coupling == CouplingKind::minibatch_ot && batch_size < 2)
    throw ConfigError("minibatch OT coupling needs batch size >= 2");
  if (coupling == CouplingKind::minibatch_ot && batch_size > kMaxAssignmentSize)
    throw ConfigError("minibatch OT coupling supports batch size <= 1024");
  if (steps < 0) throw ConfigError("step count must be nonnegative");
  if (threads < 1) throw ConfigError("thread count must be >= 1");
  optimizer.validate();
  architecture().validate();
}

FieldArchitecture TrainConfig::architecture() const {
  return FieldArchitecture{model.dim(), hidden, embed_dim, activation};
}

TrainingData TrainingData::from_labels(std::vector<int> labels, int categories) {
  if (categories < 2) throw DimensionError("training data needs K >= 2");
  for (int c : labels)
    if (c < 0 || c >= categories) throw DimensionError("label " + std::to_string(c) + " out of range");
  TrainingData d;
  d.categories = categories;
  d.labels = std::move(labels);
  return d;
}

TrainingData TrainingData::from_compositions(std::vector<Composition> compositions) {
  if (compositions.empty()) throw DimensionError("training data is empty");
  TrainingData d;
  d.categories = compositions.front().categories();
  for (const auto& x : compositions)
    if (x.categories() != d.categories) throw DimensionError("compositions have mixed category counts");
  d.compositions = std::move(compositions);
  return d;
}

double TrainingLog::mean_loss(std::size_t begin, std::size_t end) const {
  end = std::min(end, loss.size());
  if (begin >= end) throw std::out_of_range("TrainingLog::mean_loss: empty range");
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += loss[i];
  return acc / static_cast<double>(end - begin);
}

void TrainingLog::write_csv(const std::filesystem::path& path) const {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path.string());
  if (fresh) out << "step,loss,wallclock\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < loss.size(); ++i) out << i << ',' << loss[i] << ',' << wallclock[i] << '\n';
}

TrainResult train(const TrainingData& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw DimensionError("training data is empty");
  if (data.categories != cfg.model.categories)
    throw DimensionError("training data category count does not match the model");
  if (cfg.model.is_discrete != data.discrete())
    throw ConfigError(cfg.model.is_discrete ? "discrete model needs category labels"
                                            : "compositional model needs composition data");

  Rng init_rng = make_rng(cfg.seed, 0);
  Rng rng = make_rng(cfg.seed, 1);
  VelocityField field(cfg.architecture(), init_rng);
  AdamOptimizer optimizer(cfg.optimizer, field.parameter_count());
  const SimplexCoordinates coords = SimplexCoordinates::for_model(cfg.model);
  const int d = coords.dim();
  const int b = cfg.batch_size;
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TrainingLog log;
  log.loss.reserve(static_cast<std::size_t>(cfg.steps));
  log.wallclock.reserve(static_cast<std::size_t>(cfg.steps));
  const auto start = std::chrono::steady_clock::now();

  Matrix z0(d, b), z1(d, b);
  Vector t(b);
  for (long step = 0; step < cfg.steps; ++step) {
    for (int i = 0; i < b; ++i) {
      const std::size_t idx = pick(rng);
      if (data.discrete())
        z1.col(i) = coords.encode(interpolate(data.labels[idx], data.categories, cfg.model.interpolation, rng)).z;
      else
        z1.col(i) = coords.encode(data.compositions[idx]).z;
    }
    for (int i = 0; i < b; ++i) z0.col(i) = sample_base(cfg.model.base, coords, rng);
    const PairedBatch batch = couple(cfg.coupling, z0, z1);
    for (int i = 0; i < b; ++i) t[i] = unit(rng);

    if (step % kPathCheckInterval == 0) {
      const PathSample s = linear_path(batch.z0.col(0), batch.z1.col(0), t[0]);
      const Vector zt = (1.0 - t[0]) * batch.z0.col(0) + t[0] * batch.z1.col(0);
      if (!path_sample_consistent(s) || (s.zt - zt).cwiseAbs().maxCoeff() > 1e-12)
        throw std::logic_error("linear path invariant violated during training");
    }

    const CfmLoss result = cfm_loss(field, batch, t, cfg.threads);
    optimizer.step(field.mutable_parameters(), result.grads, lr_factor(cfg.optimizer.schedule, step, cfg.steps));
    for (double p : field.parameters())
      if (!std::isfinite(p)) throw std::runtime_error("training diverged at step " + std::to_string(step));
    log.loss.push_back(result.loss);
    log.wallclock.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return {std::move(field), std::move(log)};
}

}  // namespace simplexflow
