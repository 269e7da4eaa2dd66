#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace simplexflow {

// constant keeps the base rate; cosine decays it to zero over the run,
// lr_t = lr (1 + cos(pi t / T)) / 2.
enum class LrSchedule { constant, cosine };

std::string_view to_string(LrSchedule s);
LrSchedule parse_lr_schedule(std::string_view name);
double lr_factor(LrSchedule s, long step, long total_steps);

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
  LrSchedule schedule = LrSchedule::constant;

  void validate() const;
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  long step = 0;
};

// Bias-corrected Adam with decoupled weight decay.
class AdamOptimizer {
 public:
  AdamOptimizer(AdamConfig config, std::size_t parameter_count);

  // lr_scale multiplies the configured rate for this step only.
  void step(std::span<double> params, std::span<const double> grads, double lr_scale = 1.0);

  const AdamConfig& config() const { return config_; }
  const AdamState& state() const { return state_; }

 private:
  AdamConfig config_;
  AdamState state_;
};

}  // namespace simplexflow
