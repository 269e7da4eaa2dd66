#pragma once

#include "simplexflow/composition.hpp"

namespace simplexflow {

// Polygamma functions for x > 0: upward recurrence to x >= 6, then the
// asymptotic series. Throw ParameterError for x <= 0.
double digamma(double x);
double trigamma(double x);

// log Gamma(x) for x > 0 (std::lgamma).
double log_gamma(double x);

// log B(alpha) = sum log Gamma(alpha_i) - log Gamma(sum alpha_i).
double log_multivariate_beta(const Vector& alpha);

}  // namespace simplexflow
