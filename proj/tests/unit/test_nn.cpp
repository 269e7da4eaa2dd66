#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "../support/oracles.hpp"
#include "simplexflow/adam.hpp"
#include "simplexflow/checkpoint.hpp"
#include "simplexflow/errors.hpp"
#include "simplexflow/time_embedding.hpp"
#include "simplexflow/velocity_field.hpp"

using namespace simplexflow;

namespace {

FieldArchitecture tiny(int dim = 2) {
  FieldArchitecture arch;
  arch.dim = dim;
  arch.hidden = {8, 8};
  arch.embed_dim = 4;
  return arch;
}

// Random parameters everywhere, including the final layer.
VelocityField randomised(const FieldArchitecture& arch, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  VelocityField field(arch, rng);
  std::normal_distribution<double> n(0.0, 0.5);
  for (double& p : field.mutable_parameters()) p += n(rng);
  return field;
}

double weighted_output(const VelocityField& f, const Matrix& z, const Vector& t, const Matrix& up) {
  return f.forward(z, t).cwiseProduct(up).sum();
}

}  // namespace

TEST_CASE("time embedding") {
  const Vector e0 = time_embedding(0.0, 8);
  CHECK(e0.head(4).cwiseAbs().maxCoeff() == 0.0);
  CHECK((e0.tail(4).array() == 1.0).all());
  const Vector a = time_embedding(0.0, 16), b = time_embedding(0.5, 16), c = time_embedding(1.0, 16);
  CHECK((a - b).norm() > 1e-3);
  CHECK((a - c).norm() > 1e-3);
  CHECK((b - c).norm() > 1e-3);
  // Frequencies follow scale * 10000^(-2j/dim).
  const double t = 0.37e-3;
  const Vector e = time_embedding(t, 6);
  for (int j = 0; j < 3; ++j) {
    const double w = kTimeEmbeddingScale * std::pow(10000.0, -2.0 * j / 6);
    CHECK(e[j] == doctest::Approx(std::sin(t * w)));
    CHECK(e[3 + j] == doctest::Approx(std::cos(t * w)));
  }
  // Each coordinate is Lipschitz with constant at most the top frequency.
  const double h = 1e-7;
  for (double s : {0.1, 0.5, 0.9}) {
    const Vector slope = (time_embedding(s + h, 16) - time_embedding(s - h, 16)) / (2 * h);
    CHECK(slope.cwiseAbs().maxCoeff() <= kTimeEmbeddingScale * (1 + 1e-6));
  }
  CHECK_THROWS_AS(time_embedding(0.5, 7), ConfigError);
}

TEST_CASE("forward pass") {
  Rng rng = make_rng(1);
  FieldArchitecture arch = tiny(3);
  const VelocityField fresh(arch, rng);
  const Matrix z = Matrix::Random(3, 5);
  CHECK(fresh.forward(z, 0.3).cwiseAbs().maxCoeff() == 0.0);

  const VelocityField f = randomised(arch, 2);
  Vector t(5);
  t << 0.0, 0.1, 0.5, 0.9, 1.0;
  const Matrix batch = f.forward(z, t);
  for (int i = 0; i < 5; ++i) CHECK((batch.col(i) - f.forward(Vector(z.col(i)), t[i])).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(f.forward(Matrix::Zero(2, 5), t), DimensionError);
  CHECK(f.parameter_count() == (7 * 8 + 8) + (8 * 8 + 8) + (8 * 3 + 3));
}

TEST_CASE("backward matches finite differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    VelocityField f = randomised(tiny(), 100 + seed);
    std::mt19937_64 rng(seed);
    const Matrix z = oracle::random_normal(6, rng).reshaped(2, 3);
    const Vector t = (Vector(3) << 0.2e-3, 0.5e-3, 0.9e-3).finished();
    const Matrix up = oracle::random_normal(6, rng).reshaped(2, 3);

    ForwardCache cache;
    f.forward(z, t, cache);
    const FieldGradients g = f.backward(cache, up);

    double worst = 0;
    const double h = 1e-5;
    for (std::size_t i = 0; i < f.parameter_count(); ++i) {
      const double saved = f.parameters()[i];
      f.mutable_parameters()[i] = saved + h;
      const double lp = weighted_output(f, z, t, up);
      f.mutable_parameters()[i] = saved - h;
      const double lm = weighted_output(f, z, t, up);
      f.mutable_parameters()[i] = saved;
      const double fd = (lp - lm) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.params[i]) / std::max(1.0, std::abs(fd)));
    }
    CHECK(worst < 1e-4);

    auto out = [&](const Vector& flat) { return Vector::Constant(1, weighted_output(f, flat.reshaped(2, 3), t, up)); };
    const Matrix jz = oracle::jacobian(out, z.reshaped(), 1e-5);
    CHECK((jz.transpose().reshaped(2, 3) - g.input).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("backward edge cases") {
  VelocityField f = randomised(tiny(), 5);
  const Matrix z = Matrix::Random(2, 4);
  const Vector t = Vector::Constant(4, 0.5);
  ForwardCache cache;
  f.forward(z, t, cache);
  const FieldGradients g = f.backward(cache, Matrix::Zero(2, 4));
  CHECK(std::all_of(g.params.begin(), g.params.end(), [](double v) { return v == 0.0; }));
  CHECK_THROWS_AS(f.backward(cache, Matrix::Zero(2, 3)), DimensionError);
  f.mutable_parameters()[0] += 1.0;
  CHECK_THROWS_AS(f.backward(cache, Matrix::Zero(2, 4)), std::logic_error);
  CHECK_THROWS_AS(f.input_gradient(cache, Matrix::Zero(2, 4)), std::logic_error);
}

TEST_CASE("input gradient of a linear field") {
  FieldArchitecture arch;
  arch.dim = 3;
  arch.hidden = {};
  arch.embed_dim = 2;
  arch.activation = Activation::identity;
  VelocityField f = randomised(arch, 7);
  const Matrix a = f.weight(0).leftCols(3);
  const Matrix z = Matrix::Random(3, 4);
  const Matrix up = Matrix::Random(3, 4);
  ForwardCache cache;
  f.forward(z, Vector::Constant(4, 0.2), cache);
  CHECK((f.input_gradient(cache, up) - a.transpose() * up).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("adam") {
  SUBCASE("first step is a unit step of size lr") {
    AdamConfig cfg;
    cfg.learning_rate = 0.1;
    AdamOptimizer opt(cfg, 1);
    std::vector<double> w{1.0};
    const std::vector<double> g{1.0};  // d/dw of w^2 / 2 at w = 1
    opt.step(w, g);
    CHECK(w[0] == doctest::Approx(0.9).epsilon(1e-7));
    CHECK(opt.state().step == 1);
  }
  SUBCASE("zero gradient leaves parameters") {
    AdamOptimizer opt(AdamConfig{}, 3);
    std::vector<double> w{1.0, -2.0, 3.0};
    const auto before = w;
    opt.step(w, std::vector<double>(3, 0.0));
    CHECK(w == before);
  }
  SUBCASE("weight decay is decoupled") {
    AdamConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.weight_decay = 0.5;
    AdamOptimizer opt(cfg, 1);
    std::vector<double> w{2.0};
    opt.step(w, std::vector<double>{0.0});
    CHECK(w[0] == doctest::Approx(2.0 * (1 - 0.05)));
  }
  SUBCASE("converges on a convex quadratic") {
    AdamConfig cfg;
    cfg.learning_rate = 0.05;
    AdamOptimizer opt(cfg, 2);
    std::vector<double> w{1.0, -1.5};
    auto loss = [&] { return 0.5 * w[0] * w[0] + 2.0 * w[1] * w[1]; };
    for (int i = 0; i < 200; ++i) opt.step(w, std::vector<double>{w[0], 4.0 * w[1]});
    CHECK(loss() < 1e-6);
  }
  SUBCASE("lr scale multiplies the step") {
    AdamConfig cfg;
    cfg.learning_rate = 0.1;
    AdamOptimizer opt(cfg, 1);
    std::vector<double> w{1.0};
    opt.step(w, std::vector<double>{1.0}, 0.25);
    CHECK(w[0] == doctest::Approx(1.0 - 0.025).epsilon(1e-7));
  }
  AdamConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  AdamOptimizer opt(AdamConfig{}, 2);
  std::vector<double> w(3, 0.0);
  CHECK_THROWS_AS(opt.step(w, std::vector<double>(3, 0.0)), DimensionError);
}

TEST_CASE("checkpoint round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "simplexflow_ckpt_test";
  std::filesystem::create_directories(dir);
  const VelocityField f = randomised(tiny(4), 11);
  save_checkpoint(dir / "a.sxf", f, R"({"note":"x"})");
  const Checkpoint back = load_checkpoint(dir / "a.sxf");
  CHECK(back.metadata == R"({"note":"x"})");
  CHECK(back.field.architecture().hidden == f.architecture().hidden);
  CHECK(std::equal(f.parameters().begin(), f.parameters().end(), back.field.parameters().begin()));

  // Header bytes follow the documented layout.
  std::ifstream in(dir / "a.sxf", std::ios::binary);
  char head[8];
  in.read(head, 8);
  CHECK(std::string(head, 8) == "SXFFIELD");
  std::uint32_t words[7];
  in.read(reinterpret_cast<char*>(words), sizeof words);
  CHECK(words[0] == 1);
  CHECK(words[1] == 4);
  CHECK(words[2] == 4);
  CHECK(words[3] == 0);
  CHECK(words[4] == 2);
  CHECK(words[5] == 8);
  CHECK(words[6] == 8);

  std::ofstream(dir / "bad.sxf", std::ios::binary) << "NOTACHECKPOINT";
  CHECK_THROWS_AS(load_checkpoint(dir / "bad.sxf"), IoError);
  {
    std::ifstream src(dir / "a.sxf", std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(src)), {});
    std::ofstream(dir / "short.sxf", std::ios::binary) << bytes.substr(0, bytes.size() - 5);
  }
  CHECK_THROWS_AS(load_checkpoint(dir / "short.sxf"), IoError);
  CHECK_THROWS_AS(load_checkpoint(dir / "missing.sxf"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("learning-rate schedules") {
  CHECK(lr_factor(LrSchedule::constant, 500, 1000) == 1.0);
  CHECK(lr_factor(LrSchedule::cosine, 0, 1000) == doctest::Approx(1.0));
  CHECK(lr_factor(LrSchedule::cosine, 500, 1000) == doctest::Approx(0.5));
  CHECK(lr_factor(LrSchedule::cosine, 250, 1000) == doctest::Approx(0.5 + 0.25 * std::sqrt(2.0)));
  CHECK(lr_factor(LrSchedule::cosine, 1000, 1000) == doctest::Approx(0.0));
  double prev = 2.0;
  for (long t = 0; t <= 100; ++t) {
    const double f = lr_factor(LrSchedule::cosine, t, 100);
    CHECK(f <= prev);
    prev = f;
  }
  CHECK(parse_lr_schedule(to_string(LrSchedule::cosine)) == LrSchedule::cosine);
  CHECK(parse_lr_schedule("constant") == LrSchedule::constant);
  CHECK_THROWS_AS(parse_lr_schedule("step"), ConfigError);
}
