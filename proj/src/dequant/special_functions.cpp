#include "simplexflow/special_functions.hpp"

#include <cmath>

#include "simplexflow/errors.hpp"

namespace simplexflow {
namespace {
constexpr double kAsymptoticThreshold = 6.0;
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("digamma requires finite x > 0");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum B_2n / (2n x^2n)
  const double series =
      inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ParameterError("trigamma requires finite x > 0");
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x^2) + sum B_2n / x^(2n+1)
  const double series =
      inv * (1.0 + inv2 * (1.0 / 6 - inv2 * (1.0 / 30 - inv2 * (1.0 / 42 - inv2 * (1.0 / 30 - inv2 * (5.0 / 66 - inv2 * (691.0 / 2730)))))));
  return shift + series + 0.5 * inv2;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw ParameterError("log_gamma requires x > 0");
  return std::lgamma(x);
}

double log_multivariate_beta(const Vector& alpha) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) acc += log_gamma(alpha[i]);
  return acc - log_gamma(alpha.sum());
}

}  // namespace simplexflow
