#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "simplexflow/adam.hpp"
#include "simplexflow/coordinates.hpp"
#include "simplexflow/coupling.hpp"
#include "simplexflow/velocity_field.hpp"

namespace simplexflow {

struct TrainConfig {
  FlowModelSpec model;
  CouplingKind coupling = CouplingKind::independent;
  int batch_size = 256;
  long steps = 1000;
  AdamConfig optimizer;
  std::uint64_t seed = 0;
  std::vector<int> hidden{512, 512, 512, 512};
  int embed_dim = 64;
  Activation activation = Activation::gelu_tanh;
  int threads = 1;

  void validate() const;
  FieldArchitecture architecture() const;
};

// Either category labels (discrete) or compositions (compositional data).
struct TrainingData {
  int categories = 2;
  std::vector<int> labels;
  std::vector<Composition> compositions;

  static TrainingData from_labels(std::vector<int> labels, int categories);
  static TrainingData from_compositions(std::vector<Composition> compositions);

  bool discrete() const { return compositions.empty(); }
  std::size_t size() const { return discrete() ? labels.size() : compositions.size(); }
};

struct TrainingLog {
  std::vector<double> loss;
  std::vector<double> wallclock;

  // Mean loss over steps [begin, end).
  double mean_loss(std::size_t begin, std::size_t end) const;
  // Append-only CSV with header step,loss,wallclock.
  void write_csv(const std::filesystem::path& path) const;
};

struct TrainResult {
  VelocityField field;
  TrainingLog log;
};

// Minibatch loop: dequantise (discrete data), map to R^D, draw base samples,
// couple, draw t ~ U(0, 1) per pair, one Adam step on the CFM loss.
TrainResult train(const TrainingData& data, const TrainConfig& cfg);

}  // namespace simplexflow
