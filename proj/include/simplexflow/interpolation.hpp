#pragma once

#include "simplexflow/categorical.hpp"
#include "simplexflow/composition.hpp"
#include "simplexflow/dirichlet.hpp"

namespace simplexflow {

// Dirichlet dequantisation x = lambda e_k + (1 - lambda) eps, eps ~ Dir(alpha, ..., alpha).
// deterministic replaces eps by the centroid (the alpha -> infinity limit).
// scaling divides Euclidean targets by the Aitchison norm of the mean compositions.
struct InterpolationConfig {
  double lambda = 0.5;
  double alpha = 100.0;
  bool deterministic = false;
  bool scaling = false;

  // Throws ParameterError for lambda outside (0, 1] or alpha <= 0 (stochastic
  // only). Warns once per call when lambda < 1/2 since argmax recovery is lost.
  void validate() const;
  bool argmax_recoverable() const { return lambda >= 0.5; }
};

// Fresh draw for one categorical observation (0-indexed category).
// lambda = 1 lands on a vertex and the Composition constructor rejects it.
Composition interpolate(int category, int categories, const InterpolationConfig& cfg, Rng& rng);

// Index of the largest entry; ties go to the lowest index.
int argmax_category(const Vector& x);
inline int argmax_category(const Composition& x) { return argmax_category(x.values()); }

// log q_lambda(x | e_k): shifted and rescaled Dirichlet, -inf outside its support
// {x : (x - lambda e_k) / (1 - lambda) in the open simplex}.
double component_logpdf(const Composition& x, int category, const InterpolationConfig& cfg);
// General form with per-category concentrations.
double component_logpdf(const Composition& x, int category, double lambda, const Vector& alpha);

// log sum_k p_k q_lambda(x | e_k).
double mixture_logpdf(const Composition& x, const CategoricalDistribution& p,
                      const InterpolationConfig& cfg);

// mu^(k) = lambda e_k + (1 - lambda) / K.
Composition mean_composition(int category, double lambda, int categories);
// ||mu^(k)||_A = sqrt(D / K) log(1 + K lambda / (1 - lambda)); same for every k.
double mean_aitchison_norm(double lambda, int categories);

}  // namespace simplexflow
