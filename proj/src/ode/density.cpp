#include "simplexflow/density.hpp"

#include <algorithm>
#include <cmath>

#include "simplexflow/errors.hpp"
#include "simplexflow/logging.hpp"
#include "simplexflow/parallel.hpp"
#include "simplexflow/sampler.hpp"

namespace simplexflow {

Vector log_density_simplex(const VelocityField& field, const FlowModelSpec& spec,
                           const std::vector<Composition>& points, const SolverConfig& solver,
                           const DivergenceConfig& divergence, std::uint64_t seed, int threads) {
  spec.validate();
  solver.validate();
  divergence.validate();
  const SimplexCoordinates coords = SimplexCoordinates::for_model(spec);
  if (!coords.has_density()) throw ConfigError("LinearFM coordinates do not define a simplex density");
  if (field.dim() != coords.dim()) throw DimensionError("field dimension does not match the model");
  const int d = coords.dim();
  const int n = static_cast<int>(points.size());
  const bool exact = divergence.exact_for(d);

  Vector result(n);
  const std::size_t chunks = static_cast<std::size_t>((n + kSampleChunk - 1) / kSampleChunk);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const int begin = static_cast<int>(c) * kSampleChunk;
    const int len = std::min(kSampleChunk, n - begin);
    Matrix state(d + 1, len);
    Vector log_det(len);
    for (int i = 0; i < len; ++i) {
      const ToEuclidean enc = coords.encode(points[begin + i]);
      state.col(i).head(d) = enc.z;
      state(d, i) = 0.0;
      log_det[i] = enc.log_abs_det;
    }
    std::vector<Matrix> probes;
    if (!exact) {
      Rng rng = make_rng(seed, c);
      probes = rademacher_probes(d, len, divergence.probes, rng);
    }
    const OdeRhs rhs = [&](double t, const Matrix& y) {
      const Matrix z = y.topRows(d);
      const Vector times = Vector::Constant(len, t);
      const VelocityWithDivergence vd = exact ? velocity_and_exact_divergence(field, z, times)
                                              : velocity_and_hutchinson_divergence(field, z, times, probes);
      Matrix dy(d + 1, len);
      dy.topRows(d) = vd.velocity;
      dy.row(d) = vd.divergence.transpose();
      return dy;
    };
    const Matrix end = solve_ode(rhs, state, 1.0, 0.0, solver);
    for (int i = 0; i < len; ++i)
      result[begin + i] = base_logpdf(spec.base, coords, end.col(i).head(d)) + end(d, i) + log_det[i];
  });
  return result;
}

double log_density_simplex(const VelocityField& field, const FlowModelSpec& spec, const Composition& x,
                           const SolverConfig& solver, const DivergenceConfig& divergence, std::uint64_t seed) {
  return log_density_simplex(field, spec, std::vector<Composition>{x}, solver, divergence, seed)[0];
}

CategoricalEstimate estimate_categorical(const std::function<Vector(const std::vector<Composition>&)>& log_density,
                                         const InterpolationConfig& interpolation, int categories) {
  if (interpolation.deterministic)
    throw ParameterError("categorical estimator needs a stochastic interpolation (finite alpha)");
  if (!(interpolation.alpha > 1.0))
    log_warning("categorical estimator assumes alpha > 1 so that mixture modes sit at the mean compositions");
  std::vector<Composition> mus;
  mus.reserve(categories);
  for (int k = 0; k < categories; ++k) mus.push_back(mean_composition(k, interpolation.lambda, categories));
  const Vector log_q = log_density(mus);
  if (log_q.size() != categories) throw DimensionError("log density returned the wrong number of values");

  std::vector<CategoryEstimate> records;
  Vector log_ratio(categories);
  for (int k = 0; k < categories; ++k) {
    const double log_comp = component_logpdf(mus[k], k, interpolation);
    log_ratio[k] = log_q[k] - log_comp;
    records.push_back({k, mus[k], log_q[k], log_comp, std::exp(log_ratio[k])});
  }
  const double norm = log_sum_exp(log_ratio);
  std::vector<double> raw(categories), normalized(categories);
  for (int k = 0; k < categories; ++k) {
    raw[k] = records[k].p_hat;
    normalized[k] = std::exp(log_ratio[k] - norm);
  }
  return {std::move(records), std::move(raw), CategoricalDistribution::from_weights(std::move(normalized))};
}

CategoricalEstimate categorical_probabilities(const VelocityField& field, const FlowModelSpec& spec,
                                              const SolverConfig& solver, const DivergenceConfig& divergence,
                                              std::uint64_t seed) {
  if (!spec.is_discrete) throw ConfigError("categorical estimator needs a discrete model");
  return estimate_categorical(
      [&](const std::vector<Composition>& points) {
        return log_density_simplex(field, spec, points, solver, divergence, seed);
      },
      spec.interpolation, spec.categories);
}

}  // namespace simplexflow
