#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "simplexflow/categorical.hpp"
#include "simplexflow/coordinates.hpp"
#include "simplexflow/divergence.hpp"
#include "simplexflow/solver.hpp"

namespace simplexflow {

// log q_theta(x) = log p0(z0) - int_0^1 div v(z_s, s) ds + log |dz1/dx|.
//
// Sign convention: the augmented state (z, a) starts at t = 1 with z = phi(x)
// and a = 0, and is integrated to t = 0 under dz/dt = v, da/dt = div v.
// Then a(0) = -int_0^1 div v, so log p1(z1) = log p0(z0) + a(0).
Vector log_density_simplex(const VelocityField& field, const FlowModelSpec& spec,
                           const std::vector<Composition>& points, const SolverConfig& solver,
                           const DivergenceConfig& divergence, std::uint64_t seed = 0, int threads = 1);
double log_density_simplex(const VelocityField& field, const FlowModelSpec& spec, const Composition& x,
                           const SolverConfig& solver, const DivergenceConfig& divergence, std::uint64_t seed = 0);

struct CategoryEstimate {
  int category = 0;
  Composition mu;
  double log_q_theta = 0.0;
  double log_q_component = 0.0;
  double p_hat = 0.0;  // raw ratio q_theta(mu) / q_lambda(mu | e_k)
};

struct CategoricalEstimate {
  std::vector<CategoryEstimate> records;
  std::vector<double> raw;
  CategoricalDistribution normalized;
};

// P(C = k) ~ q(mu^(k)) / q_lambda(mu^(k) | e_k), evaluated in log space for
// an arbitrary simplex log density. Warns when alpha <= 1.
CategoricalEstimate estimate_categorical(const std::function<Vector(const std::vector<Composition>&)>& log_density,
                                         const InterpolationConfig& interpolation, int categories);

// Same estimator with q = q_theta from the trained field.
CategoricalEstimate categorical_probabilities(const VelocityField& field, const FlowModelSpec& spec,
                                              const SolverConfig& solver, const DivergenceConfig& divergence,
                                              std::uint64_t seed = 0);

}  // namespace simplexflow
