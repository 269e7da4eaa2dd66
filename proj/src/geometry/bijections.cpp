#include "simplexflow/bijections.hpp"

#include <cmath>
#include <string>

#include "simplexflow/errors.hpp"

namespace simplexflow {
namespace {

double sigmoid(double y) { return 1.0 / (1.0 + std::exp(-y)); }

double softplus(double y) { return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y)); }

double neg_sum_log(const Composition& x) { return -x.values().array().log().sum(); }

// tail[k] = sum_{i > k} x_i (0-indexed), i.e. the stick left after the first k+1 pieces.
Vector tail_sums(const Composition& x) {
  const int k = x.categories();
  Vector tail(k);
  double acc = 0.0;
  for (int i = k - 1; i >= 0; --i) {
    tail[i] = acc;
    acc += x[i];
  }
  return tail;
}

Vector mlr_values(const Composition& x) {
  const int d = x.dim();
  const Vector tail = tail_sums(x);
  Vector z(d);
  for (int i = 0; i < d; ++i) {
    if (!(tail[i] > 0.0)) throw DomainError("stick remainder is not positive");
    z[i] = std::log(x[i]) - std::log(tail[i]);
  }
  return z;
}

// log x for x = mlr^-1(y), computed without forming x.
Vector mlr_inv_logs(const Vector& y) {
  const int d = static_cast<int>(y.size());
  Vector logs(d + 1);
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    acc += softplus(y[i]);
    logs[i] = y[i] - acc;
  }
  logs[d] = -acc;
  return logs;
}

// Centring offset log(K - k) for 1-indexed k, i.e. log(K - 1 - i) for 0-indexed i.
double sb_shift(int categories, int i) { return std::log(static_cast<double>(categories - 1 - i)); }

}  // namespace

ToEuclidean ilr(const Composition& x, const HelmertBasis& basis) {
  if (basis.categories() != x.categories()) throw DimensionError("ilr: basis size mismatch");
  const Vector logs = x.values().array().log().matrix();
  return {basis.matrix() * logs, basis.reduced_log_abs_det() - logs.sum()};
}

Composition ilr_inv(const EuclideanPoint& z, const HelmertBasis& basis) {
  require_finite(z, "ilr_inv");
  if (z.size() != basis.dim()) throw DimensionError("ilr_inv: basis size mismatch");
  return Composition(softmax(basis.matrix().transpose() * z));
}

ToEuclidean ilr(const Composition& x) { return ilr(x, HelmertBasis(x.categories())); }

Composition ilr_inv(const EuclideanPoint& z) {
  return ilr_inv(z, HelmertBasis(static_cast<int>(z.size()) + 1));
}

ToEuclidean stick_breaking(const Composition& x) {
  Vector z = mlr_values(x);
  for (int i = 0; i < z.size(); ++i) z[i] += sb_shift(x.categories(), i);
  return {std::move(z), neg_sum_log(x)};
}

Composition stick_breaking_inv(const EuclideanPoint& z) {
  require_finite(z, "stick_breaking_inv");
  const int d = static_cast<int>(z.size());
  if (d < 1) throw DimensionError("stick_breaking_inv: empty input");
  const int k = d + 1;
  Vector x(k);
  // rest = 1 - sum_{i<k} x_i, updated as rest - x_k = rest * sigmoid(-y_k)
  // so that a short remaining stick keeps its relative precision.
  double rest = 1.0;
  for (int i = 0; i < d; ++i) {
    const double y = z[i] - sb_shift(k, i);
    x[i] = rest * sigmoid(y);
    rest *= sigmoid(-y);
  }
  x[d] = rest;
  return Composition(std::move(x));
}

Vector stick_breaking_inv_product(const EuclideanPoint& z) {
  require_finite(z, "stick_breaking_inv_product");
  const int d = static_cast<int>(z.size());
  const int k = d + 1;
  Vector x(k);
  for (int j = 0; j <= d; ++j) {
    double prod = 1.0;
    for (int i = 0; i < j; ++i) prod *= 1.0 - sigmoid(z[i] - sb_shift(k, i));
    x[j] = j < d ? prod * sigmoid(z[j] - sb_shift(k, j)) : prod;
  }
  return x;
}

ToEuclidean alr(const Composition& x) {
  const int d = x.dim();
  const double log_last = std::log(x[d]);
  Vector z(d);
  for (int i = 0; i < d; ++i) z[i] = std::log(x[i]) - log_last;
  return {std::move(z), neg_sum_log(x)};
}

Composition alr_inv(const EuclideanPoint& z) {
  require_finite(z, "alr_inv");
  Vector logits(z.size() + 1);
  logits << z, 0.0;
  return Composition(softmax(logits));
}

ToEuclidean mlr(const Composition& x) { return {mlr_values(x), neg_sum_log(x)}; }

Composition mlr_inv(const EuclideanPoint& z) {
  require_finite(z, "mlr_inv");
  return Composition(mlr_inv_logs(z).array().exp().matrix());
}

SphereImage sphere_map(const Composition& x) {
  const double d = x.dim();
  return {x.values().array().sqrt().matrix(), -d * std::log(2.0) + 0.5 * neg_sum_log(x)};
}

Composition sphere_map_inv(const Vector& z) {
  require_finite(z, "sphere_map_inv");
  return Composition(z.array().square().matrix());
}

std::string_view to_string(BijectionKind kind) {
  switch (kind) {
    case BijectionKind::ilr: return "ilr";
    case BijectionKind::sb: return "sb";
    case BijectionKind::alr: return "alr";
    case BijectionKind::mlr: return "mlr";
    case BijectionKind::sphere: return "sphere";
  }
  return "?";
}

BijectionKind parse_bijection_kind(std::string_view name) {
  if (name == "ilr") return BijectionKind::ilr;
  if (name == "sb" || name == "stick_breaking") return BijectionKind::sb;
  if (name == "alr") return BijectionKind::alr;
  if (name == "mlr") return BijectionKind::mlr;
  if (name == "sphere") return BijectionKind::sphere;
  throw ConfigError("unknown bijection '" + std::string(name) + "'");
}

Bijection::Bijection(BijectionKind kind, int categories) : kind_(kind), categories_(categories) {
  if (categories < 2) throw DimensionError("bijection needs K >= 2");
  if (kind == BijectionKind::ilr) helmert_.emplace(categories);
}

ToEuclidean Bijection::forward(const Composition& x) const {
  if (x.categories() != categories_) throw DimensionError("bijection: category count mismatch");
  switch (kind_) {
    case BijectionKind::ilr: return ilr(x, *helmert_);
    case BijectionKind::sb: return stick_breaking(x);
    case BijectionKind::alr: return alr(x);
    case BijectionKind::mlr: return mlr(x);
    case BijectionKind::sphere: {
      auto s = sphere_map(x);
      return {std::move(s.z), s.log_volume};
    }
  }
  throw ConfigError("unhandled bijection kind");
}

Composition Bijection::inverse(const Vector& z) const {
  const int expected = kind_ == BijectionKind::sphere ? categories_ : categories_ - 1;
  if (z.size() != expected) throw DimensionError("bijection inverse: dimension mismatch");
  switch (kind_) {
    case BijectionKind::ilr: return ilr_inv(z, *helmert_);
    case BijectionKind::sb: return stick_breaking_inv(z);
    case BijectionKind::alr: return alr_inv(z);
    case BijectionKind::mlr: return mlr_inv(z);
    case BijectionKind::sphere: return sphere_map_inv(z);
  }
  throw ConfigError("unhandled bijection kind");
}

Vector Bijection::inverse_logits(const EuclideanPoint& z) const {
  require_finite(z, "inverse_logits");
  switch (kind_) {
    case BijectionKind::ilr: return helmert_->matrix().transpose() * z;
    case BijectionKind::alr: {
      Vector logits(z.size() + 1);
      logits << z, 0.0;
      return logits;
    }
    case BijectionKind::mlr: return mlr_inv_logs(z);
    case BijectionKind::sb: {
      Vector y = z;
      for (int i = 0; i < y.size(); ++i) y[i] -= sb_shift(categories_, i);
      return mlr_inv_logs(y);
    }
    case BijectionKind::sphere: return z.array().abs().log().matrix();
  }
  throw ConfigError("unhandled bijection kind");
}

}  // namespace simplexflow
