#include "simplexflow/velocity_field.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "simplexflow/errors.hpp"
#include "simplexflow/time_embedding.hpp"

namespace simplexflow {
namespace {

std::atomic<std::uint64_t> g_generation{1};

std::uint64_t next_generation() { return g_generation.fetch_add(1); }

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

double gelu(double x) { return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x))); }

double gelu_grad(double x) {
  const double th = std::tanh(kGeluC * (x + kGeluA * x * x * x));
  return 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
}

Matrix activate(const Matrix& a, Activation kind) {
  if (kind == Activation::identity) return a;
  return a.unaryExpr(&gelu);
}

Matrix activation_grad(const Matrix& a, Activation kind) {
  if (kind == Activation::identity) return Matrix::Ones(a.rows(), a.cols());
  return a.unaryExpr(&gelu_grad);
}

}  // namespace

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::gelu_tanh: return "gelu_tanh";
    case Activation::identity: return "identity";
  }
  return "?";
}

Activation parse_activation(std::string_view name) {
  if (name == "gelu_tanh" || name == "gelu") return Activation::gelu_tanh;
  if (name == "identity" || name == "linear") return Activation::identity;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void FieldArchitecture::validate() const {
  if (dim < 1) throw ConfigError("velocity field dimension must be >= 1");
  if (embed_dim <= 0 || embed_dim % 2 != 0) throw ConfigError("time embedding dimension must be positive and even");
  for (int w : hidden)
    if (w < 1) throw ConfigError("hidden layer widths must be >= 1");
}

VelocityField::VelocityField(FieldArchitecture arch, Rng& rng) : arch_(std::move(arch)) {
  build_layout();
  for (int l = 0; l + 1 < layer_count(); ++l) {
    const double bound = std::sqrt(6.0 / offsets_[l].in);
    std::uniform_real_distribution<double> init(-bound, bound);
    auto w = mutable_weight(l);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = init(rng);
  }
}

VelocityField::VelocityField(FieldArchitecture arch, std::vector<double> params) : arch_(std::move(arch)) {
  build_layout();
  if (params.size() != params_.size())
    throw DimensionError("parameter count " + std::to_string(params.size()) + " does not match architecture (" +
                         std::to_string(params_.size()) + ")");
  params_.assign(params.begin(), params.end());
}

VelocityField VelocityField::zeros(FieldArchitecture arch) {
  Rng rng(0);
  VelocityField field(std::move(arch), rng);
  auto params = field.mutable_parameters();
  std::fill(params.begin(), params.end(), 0.0);
  return field;
}

void VelocityField::build_layout() {
  arch_.validate();
  offsets_.clear();
  std::size_t cursor = 0;
  int in = arch_.input_width();
  std::vector<int> outs = arch_.hidden;
  outs.push_back(arch_.dim);
  for (int out : outs) {
    LayerOffsets lo;
    lo.in = in;
    lo.out = out;
    lo.weight = cursor;
    cursor += static_cast<std::size_t>(in) * out;
    lo.bias = cursor;
    cursor += out;
    offsets_.push_back(lo);
    in = out;
  }
  params_.assign(cursor, 0.0);
  generation_ = next_generation();
}

std::span<double> VelocityField::mutable_parameters() {
  generation_ = next_generation();
  return params_;
}

Eigen::Map<const RowMatrix> VelocityField::weight(int layer) const {
  const auto& lo = offsets_.at(layer);
  return {params_.data() + lo.weight, lo.out, lo.in};
}

Eigen::Map<const Vector> VelocityField::bias(int layer) const {
  const auto& lo = offsets_.at(layer);
  return {params_.data() + lo.bias, lo.out};
}

Eigen::Map<RowMatrix> VelocityField::mutable_weight(int layer) {
  generation_ = next_generation();
  const auto& lo = offsets_.at(layer);
  return {params_.data() + lo.weight, lo.out, lo.in};
}

Eigen::Map<Vector> VelocityField::mutable_bias(int layer) {
  generation_ = next_generation();
  const auto& lo = offsets_.at(layer);
  return {params_.data() + lo.bias, lo.out};
}

Matrix VelocityField::input_matrix(const Matrix& z, const Vector& t) const {
  if (z.rows() != arch_.dim)
    throw DimensionError("velocity field expects " + std::to_string(arch_.dim) + " rows, got " +
                         std::to_string(z.rows()));
  if (t.size() != z.cols()) throw DimensionError("velocity field: one time per column required");
  Matrix x(arch_.input_width(), z.cols());
  x.topRows(arch_.dim) = z;
  for (Eigen::Index c = 0; c < z.cols(); ++c) x.col(c).tail(arch_.embed_dim) = time_embedding(t[c], arch_.embed_dim);
  return x;
}

Matrix VelocityField::forward(const Matrix& z, const Vector& t) const {
  Matrix h = input_matrix(z, t);
  for (int l = 0; l < layer_count(); ++l) {
    Matrix a = weight(l) * h;
    a.colwise() += bias(l);
    h = l + 1 < layer_count() ? activate(a, arch_.activation) : std::move(a);
  }
  return h;
}

Matrix VelocityField::forward(const Matrix& z, double t) const {
  return forward(z, Vector::Constant(z.cols(), t));
}

Vector VelocityField::forward(const Vector& z, double t) const {
  return forward(Matrix(z), Vector::Constant(1, t)).col(0);
}

Matrix VelocityField::forward(const Matrix& z, const Vector& t, ForwardCache& cache) const {
  cache.inputs.clear();
  cache.preacts.clear();
  cache.inputs.push_back(input_matrix(z, t));
  Matrix out;
  for (int l = 0; l < layer_count(); ++l) {
    Matrix a = weight(l) * cache.inputs.back();
    a.colwise() += bias(l);
    if (l + 1 < layer_count()) {
      cache.inputs.push_back(activate(a, arch_.activation));
      cache.preacts.push_back(std::move(a));
    } else {
      out = std::move(a);
    }
  }
  cache.generation = generation_;
  return out;
}

void VelocityField::check_cache(const ForwardCache& cache, const Matrix& upstream) const {
  if (cache.generation != generation_ || cache.inputs.size() != offsets_.size())
    throw std::logic_error("velocity field cache is stale; rerun forward");
  if (upstream.rows() != arch_.dim || upstream.cols() != cache.inputs.front().cols())
    throw DimensionError("upstream gradient shape does not match the cached batch");
}

FieldGradients VelocityField::backward(const ForwardCache& cache, const Matrix& upstream) const {
  check_cache(cache, upstream);
  FieldGradients grads;
  grads.params.assign(params_.size(), 0.0);
  Matrix g = upstream;
  for (int l = layer_count() - 1; l >= 0; --l) {
    const auto& lo = offsets_[l];
    // Reduce into owned (aligned) temporaries; the heap address of
    // grads.params must not influence the summation order.
    const RowMatrix dw = g * cache.inputs[l].transpose();
    const Vector db = g.rowwise().sum();
    std::copy(dw.data(), dw.data() + dw.size(), grads.params.begin() + lo.weight);
    std::copy(db.data(), db.data() + db.size(), grads.params.begin() + lo.bias);
    Matrix back = weight(l).transpose() * g;
    if (l > 0)
      g = back.cwiseProduct(activation_grad(cache.preacts[l - 1], arch_.activation));
    else
      grads.input = back.topRows(arch_.dim);
  }
  return grads;
}

Matrix VelocityField::input_gradient(const ForwardCache& cache, const Matrix& upstream) const {
  check_cache(cache, upstream);
  Matrix g = upstream;
  for (int l = layer_count() - 1; l > 0; --l)
    g = (weight(l).transpose() * g).cwiseProduct(activation_grad(cache.preacts[l - 1], arch_.activation));
  // Only the z rows of the first layer matter.
  return weight(0).leftCols(arch_.dim).transpose() * g;
}

}  // namespace simplexflow
