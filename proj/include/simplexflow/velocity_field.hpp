#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "simplexflow/composition.hpp"
#include "simplexflow/dirichlet.hpp"

namespace simplexflow {

enum class Activation : std::uint32_t { gelu_tanh = 0, identity = 1 };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

struct FieldArchitecture {
  int dim = 1;
  std::vector<int> hidden{512, 512, 512, 512};
  int embed_dim = 64;
  Activation activation = Activation::gelu_tanh;

  int input_width() const { return dim + embed_dim; }
  // Throws ConfigError on nonpositive widths or an odd embedding size.
  void validate() const;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Activations saved by a training forward pass. Tied to the parameter
// generation it was computed with.
struct ForwardCache {
  std::vector<Matrix> inputs;   // inputs[l] feeds layer l; inputs[0] = [z; emb(t)]
  std::vector<Matrix> preacts;  // pre-activations of the hidden layers
  std::uint64_t generation = 0;
};

struct FieldGradients {
  std::vector<double> params;  // same layout as VelocityField::parameters()
  Matrix input;                // d(loss)/dz, D x B
};

// v_theta(z, t) = MLP([z; emb(t)]). Parameters live in one flat buffer:
// for each layer, the out x in weight in row-major order, then the bias.
// Batches are column-major D x B matrices.
class VelocityField {
 public:
  // He-uniform hidden layers, zero biases, zero final layer.
  VelocityField(FieldArchitecture arch, Rng& rng);
  VelocityField(FieldArchitecture arch, std::vector<double> params);
  static VelocityField zeros(FieldArchitecture arch);

  const FieldArchitecture& architecture() const { return arch_; }
  int dim() const { return arch_.dim; }
  int layer_count() const { return static_cast<int>(offsets_.size()); }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<const double> parameters() const { return params_; }
  // Invalidates outstanding caches.
  std::span<double> mutable_parameters();

  Eigen::Map<const RowMatrix> weight(int layer) const;
  Eigen::Map<const Vector> bias(int layer) const;
  Eigen::Map<RowMatrix> mutable_weight(int layer);
  Eigen::Map<Vector> mutable_bias(int layer);

  Matrix forward(const Matrix& z, const Vector& t) const;
  Matrix forward(const Matrix& z, double t) const;
  Vector forward(const Vector& z, double t) const;
  Matrix forward(const Matrix& z, const Vector& t, ForwardCache& cache) const;

  // Reverse-mode pass for upstream = d(loss)/dv (D x B). Throws if the cache
  // is stale or its batch size disagrees with upstream.
  FieldGradients backward(const ForwardCache& cache, const Matrix& upstream) const;
  // Only the input part: returns (dv/dz)^T upstream per column.
  Matrix input_gradient(const ForwardCache& cache, const Matrix& upstream) const;

  std::uint64_t generation() const { return generation_; }

 private:
  struct LayerOffsets {
    int in = 0;
    int out = 0;
    std::size_t weight = 0;
    std::size_t bias = 0;
  };

  void build_layout();
  Matrix input_matrix(const Matrix& z, const Vector& t) const;
  void check_cache(const ForwardCache& cache, const Matrix& upstream) const;

  FieldArchitecture arch_;
  std::vector<LayerOffsets> offsets_;
  // Aligned so Eigen's vectorised kernels see the same address residues on
  // every copy of the field; otherwise results can differ in the last ulp.
  std::vector<double, Eigen::aligned_allocator<double>> params_;
  std::uint64_t generation_ = 0;
};

}  // namespace simplexflow
