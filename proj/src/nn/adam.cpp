#include "simplexflow/adam.hpp"

#include <cmath>
#include <string>

#include "simplexflow/errors.hpp"

namespace simplexflow {

std::string_view to_string(LrSchedule s) { return s == LrSchedule::cosine ? "cosine" : "constant"; }

LrSchedule parse_lr_schedule(std::string_view name) {
  if (name == "constant") return LrSchedule::constant;
  if (name == "cosine") return LrSchedule::cosine;
  throw ConfigError("unknown learning-rate schedule '" + std::string(name) + "'");
}

double lr_factor(LrSchedule s, long step, long total_steps) {
  if (s == LrSchedule::constant || total_steps <= 0) return 1.0;
  return 0.5 * (1.0 + std::cos(M_PI * static_cast<double>(step) / static_cast<double>(total_steps)));
}

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("Adam learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("Adam betas must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight decay must be nonnegative");
}

AdamOptimizer::AdamOptimizer(AdamConfig config, std::size_t parameter_count) : config_(config) {
  config_.validate();
  state_.first_moment.assign(parameter_count, 0.0);
  state_.second_moment.assign(parameter_count, 0.0);
}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grads, double lr_scale) {
  if (params.size() != state_.first_moment.size() || grads.size() != params.size())
    throw DimensionError("Adam: parameter/gradient sizes do not match optimizer state");
  ++state_.step;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state_.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state_.step));
  const double lr = config_.learning_rate * lr_scale;
  auto& m = state_.first_moment;
  auto& v = state_.second_moment;
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = b1 * m[i] + (1.0 - b1) * grads[i];
    v[i] = b2 * v[i] + (1.0 - b2) * grads[i] * grads[i];
    const double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.epsilon);
    params[i] -= lr * (update + config_.weight_decay * params[i]);
  }
}

}  // namespace simplexflow
