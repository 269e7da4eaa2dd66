#include "simplexflow/aitchison.hpp"

#include <cmath>

#include "simplexflow/errors.hpp"

namespace simplexflow {

Composition perturb(const Composition& x, const Composition& y) {
  if (x.categories() != y.categories()) throw DimensionError("perturb: category count mismatch");
  return Composition::closure(x.values().cwiseProduct(y.values()));
}

Composition perturb_difference(const Composition& x, const Composition& y) {
  if (x.categories() != y.categories())
    throw DimensionError("perturb_difference: category count mismatch");
  return Composition::closure(x.values().cwiseQuotient(y.values()));
}

Vector clr(const Composition& x) {
  Vector logs = x.values().array().log().matrix();
  return (logs.array() - logs.mean()).matrix();
}

double aitchison_inner(const Composition& x, const Composition& y) {
  if (x.categories() != y.categories())
    throw DimensionError("aitchison_inner: category count mismatch");
  return clr(x).dot(clr(y));
}

double aitchison_norm(const Composition& x) { return clr(x).norm(); }

double aitchison_distance(const Composition& x, const Composition& y) {
  return aitchison_norm(perturb_difference(x, y));
}

}  // namespace simplexflow
