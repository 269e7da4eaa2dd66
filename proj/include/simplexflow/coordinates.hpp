#pragma once

#include <optional>
#include <string_view>

#include "simplexflow/bijections.hpp"
#include "simplexflow/dirichlet.hpp"
#include "simplexflow/interpolation.hpp"

namespace simplexflow {

// Euclidean coordinates the flow model works in. `linear` is the LinearFM
// baseline: the first D simplex coordinates used as they are.
enum class MapKind { ilr, sb, alr, mlr, linear };

enum class BaseKind { standard_normal, uniform_simplex };

std::string_view to_string(MapKind kind);
MapKind parse_map_kind(std::string_view name);
std::string_view to_string(BaseKind kind);
BaseKind parse_base_kind(std::string_view name);

// LinearFM outputs are clipped to this floor before renormalising.
inline constexpr double kProjectionFloor = 1e-12;

// Everything needed to go between a trained field and the simplex.
struct FlowModelSpec {
  MapKind map = MapKind::ilr;
  int categories = 2;
  InterpolationConfig interpolation;
  BaseKind base = BaseKind::standard_normal;
  bool is_discrete = true;

  int dim() const { return categories - 1; }
  void validate() const;
};

class SimplexCoordinates {
 public:
  // scale divides the Euclidean coordinates (1 = no scaling).
  SimplexCoordinates(MapKind kind, int categories, double scale = 1.0);
  // Applies the mean-composition scaling when spec.interpolation.scaling is set.
  static SimplexCoordinates for_model(const FlowModelSpec& spec);

  MapKind kind() const { return kind_; }
  int categories() const { return categories_; }
  int dim() const { return categories_ - 1; }
  double scale() const { return scale_; }
  bool has_density() const { return kind_ != MapKind::linear; }

  // z = phi(x) / scale with log |det dz/dx_{1:D}|.
  ToEuclidean encode(const Composition& x) const;
  // phi^-1(scale z). LinearFM projects onto the simplex (clip + renormalise).
  Composition decode(const Vector& z) const;
  // LinearFM: [z, 1 - sum z] with no projection. Other maps: decode(z).values().
  Vector decode_raw(const Vector& z) const;
  // argmax of the decoded composition, robust to underflow.
  int decode_category(const Vector& z) const;

 private:
  MapKind kind_;
  int categories_;
  double scale_;
  std::optional<Bijection> bijection_;
};

// z0 ~ p0. uniform_simplex draws x0 ~ Dir(1, ..., 1) and encodes it.
Vector sample_base(BaseKind base, const SimplexCoordinates& coords, Rng& rng);
// log p0(z0). uniform_simplex adds the change of variables through the map.
double base_logpdf(BaseKind base, const SimplexCoordinates& coords, const Vector& z0);

}  // namespace simplexflow
