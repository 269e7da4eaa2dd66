#include "simplexflow/coordinates.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "simplexflow/errors.hpp"
#include "simplexflow/special_functions.hpp"

namespace simplexflow {

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::ilr: return "ilr";
    case MapKind::sb: return "sb";
    case MapKind::alr: return "alr";
    case MapKind::mlr: return "mlr";
    case MapKind::linear: return "linear";
  }
  return "?";
}

MapKind parse_map_kind(std::string_view name) {
  if (name == "ilr") return MapKind::ilr;
  if (name == "sb" || name == "stick_breaking") return MapKind::sb;
  if (name == "alr") return MapKind::alr;
  if (name == "mlr") return MapKind::mlr;
  if (name == "linear" || name == "linear_fm") return MapKind::linear;
  throw ConfigError("unknown bijection '" + std::string(name) + "'");
}

std::string_view to_string(BaseKind kind) {
  return kind == BaseKind::standard_normal ? "standard_normal" : "uniform_simplex";
}

BaseKind parse_base_kind(std::string_view name) {
  if (name == "standard_normal" || name == "normal") return BaseKind::standard_normal;
  if (name == "uniform_simplex" || name == "uniform") return BaseKind::uniform_simplex;
  throw ConfigError("unknown base distribution '" + std::string(name) + "'");
}

void FlowModelSpec::validate() const {
  if (categories < 2) throw ConfigError("flow model needs K >= 2");
  if (is_discrete) interpolation.validate();
  if (interpolation.scaling && !(interpolation.lambda < 1.0))
    throw ConfigError("scaling needs lambda < 1");
}

namespace {
BijectionKind to_bijection(MapKind kind) {
  switch (kind) {
    case MapKind::ilr: return BijectionKind::ilr;
    case MapKind::sb: return BijectionKind::sb;
    case MapKind::alr: return BijectionKind::alr;
    case MapKind::mlr: return BijectionKind::mlr;
    case MapKind::linear: break;
  }
  throw ConfigError("linear coordinates have no bijection");
}
}  // namespace

SimplexCoordinates::SimplexCoordinates(MapKind kind, int categories, double scale)
    : kind_(kind), categories_(categories), scale_(scale) {
  if (categories < 2) throw DimensionError("coordinates need K >= 2");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("coordinate scale must be positive");
  if (kind != MapKind::linear) bijection_.emplace(to_bijection(kind), categories);
}

SimplexCoordinates SimplexCoordinates::for_model(const FlowModelSpec& spec) {
  const double scale =
      spec.interpolation.scaling ? mean_aitchison_norm(spec.interpolation.lambda, spec.categories) : 1.0;
  return SimplexCoordinates(spec.map, spec.categories, scale);
}

ToEuclidean SimplexCoordinates::encode(const Composition& x) const {
  if (x.categories() != categories_) throw DimensionError("encode: category count mismatch");
  ToEuclidean out;
  if (kind_ == MapKind::linear) {
    out.z = x.values().head(dim());
  } else {
    out = bijection_->forward(x);
  }
  if (scale_ != 1.0) {
    out.z /= scale_;
    out.log_abs_det -= dim() * std::log(scale_);
  }
  return out;
}

Vector SimplexCoordinates::decode_raw(const Vector& z) const {
  if (z.size() != dim()) throw DimensionError("decode: dimension mismatch");
  const Vector scaled = scale_ == 1.0 ? z : Vector(z * scale_);
  if (kind_ != MapKind::linear) return bijection_->inverse(scaled).values();
  Vector x(categories_);
  x.head(dim()) = scaled;
  x[dim()] = 1.0 - scaled.sum();
  return x;
}

Composition SimplexCoordinates::decode(const Vector& z) const {
  if (kind_ != MapKind::linear) return Composition(decode_raw(z));
  require_finite(z, "decode");
  Vector x = decode_raw(z).cwiseMax(kProjectionFloor);
  return Composition(x / x.sum());
}

int SimplexCoordinates::decode_category(const Vector& z) const {
  if (z.size() != dim()) throw DimensionError("decode: dimension mismatch");
  if (kind_ == MapKind::linear) return argmax_category(decode_raw(z));
  return argmax_category(bijection_->inverse_logits(scale_ == 1.0 ? z : Vector(z * scale_)));
}

Vector sample_base(BaseKind base, const SimplexCoordinates& coords, Rng& rng) {
  if (base == BaseKind::uniform_simplex)
    return coords.encode(sample_symmetric_dirichlet(1.0, coords.categories(), rng)).z;
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(coords.dim());
  for (int i = 0; i < z.size(); ++i) z[i] = normal(rng);
  return z;
}

double base_logpdf(BaseKind base, const SimplexCoordinates& coords, const Vector& z0) {
  if (z0.size() != coords.dim()) throw DimensionError("base_logpdf: dimension mismatch");
  if (base == BaseKind::standard_normal)
    return -0.5 * coords.dim() * std::log(2.0 * std::numbers::pi) - 0.5 * z0.squaredNorm();
  // Uniform on the simplex has density Gamma(K) = D! in the first D coordinates.
  const Composition x0 = coords.decode(z0);
  return log_gamma(coords.categories()) - coords.encode(x0).log_abs_det;
}

}  // namespace simplexflow
