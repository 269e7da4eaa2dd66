#pragma once

#include <cstdint>
#include <random>

#include "simplexflow/composition.hpp"

namespace simplexflow {

using Rng = std::mt19937_64;

// Deterministic stream derived from a master seed and a stream index.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Normalised Gamma(alpha, 1) draws. For alpha < 1 the draw is boosted,
// G(alpha) = G(alpha + 1) U^(1/alpha), and normalised in log space.
Composition sample_symmetric_dirichlet(double alpha, int categories, Rng& rng);

// Log density of Dir(alpha) at x, with respect to Lebesgue measure on the
// first K - 1 coordinates. x must have strictly positive entries.
double dirichlet_logpdf(const Vector& x, const Vector& alpha);
double dirichlet_logpdf(const Vector& x, double alpha);

}  // namespace simplexflow
