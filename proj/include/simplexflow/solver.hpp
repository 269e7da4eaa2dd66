#pragma once

#include <functional>
#include <stdexcept>
#include <string_view>

#include "simplexflow/composition.hpp"
#include "simplexflow/velocity_field.hpp"

namespace simplexflow {

enum class SolverMethod { euler, dopri5 };

std::string_view to_string(SolverMethod m);
SolverMethod parse_solver_method(std::string_view name);

struct SolverConfig {
  SolverMethod method = SolverMethod::euler;
  int steps = 300;  // euler
  double atol = 1e-6;
  double rtol = 1e-6;
  long max_steps = 100000;  // dopri5 accepted + rejected steps

  void validate() const;
};

// dopri5 ran out of steps. Carries the state reached so far.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Matrix partial_state, double reached_time)
      : std::runtime_error(what), partial_state_(std::move(partial_state)), reached_time_(reached_time) {}
  const Matrix& partial_state() const { return partial_state_; }
  double reached_time() const { return reached_time_; }

 private:
  Matrix partial_state_;
  double reached_time_;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
};

// dy/dt = rhs(t, y) on a matrix-valued state.
using OdeRhs = std::function<Matrix(double t, const Matrix& y)>;

// Integrates from t0 to t1 (either order). Euler takes `steps` uniform steps;
// dopri5 uses the embedded 4(5) error estimate, a max-norm over all entries
// scaled by atol + rtol |y|, and a PI step-size controller.
Matrix solve_ode(const OdeRhs& rhs, Matrix y0, double t0, double t1, const SolverConfig& cfg,
                 OdeStats* stats = nullptr);

enum class Direction { forward, reverse };

// forward: t 0 -> 1, reverse: t 1 -> 0. Columns of z0 are independent trajectories.
Matrix integrate(const VelocityField& field, const Matrix& z0, Direction direction, const SolverConfig& cfg,
                 OdeStats* stats = nullptr);

}  // namespace simplexflow
