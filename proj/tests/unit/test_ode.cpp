#include "doctest.h"

#include <cmath>

#include "../support/oracles.hpp"
#include "simplexflow/datasets.hpp"
#include "simplexflow/density.hpp"
#include "simplexflow/divergence.hpp"
#include "simplexflow/errors.hpp"
#include "simplexflow/metrics.hpp"
#include "simplexflow/sampler.hpp"
#include "simplexflow/solver.hpp"
#include "simplexflow/trainer.hpp"

using namespace simplexflow;

namespace {

// v(z, t) = A z + c, independent of t.
VelocityField linear_field(const Matrix& a, const Vector& c = Vector()) {
  FieldArchitecture arch;
  arch.dim = static_cast<int>(a.rows());
  arch.hidden = {};
  arch.embed_dim = 2;
  arch.activation = Activation::identity;
  VelocityField f = VelocityField::zeros(arch);
  f.mutable_weight(0).leftCols(a.cols()) = a;
  if (c.size() > 0) f.mutable_bias(0) = c;
  return f;
}

SolverConfig euler(int steps) {
  SolverConfig s;
  s.method = SolverMethod::euler;
  s.steps = steps;
  return s;
}

SolverConfig dopri5(double tol) {
  SolverConfig s;
  s.method = SolverMethod::dopri5;
  s.atol = tol;
  s.rtol = tol;
  return s;
}

VelocityField randomised(int dim, std::uint64_t seed) {
  FieldArchitecture arch;
  arch.dim = dim;
  arch.hidden = {8, 8};
  arch.embed_dim = 4;
  Rng rng = make_rng(seed);
  VelocityField f(arch, rng);
  std::normal_distribution<double> n(0.0, 0.5);
  for (double& p : f.mutable_parameters()) p += n(rng);
  return f;
}

}  // namespace

TEST_CASE("integrate") {
  std::mt19937_64 rng(1);
  const Matrix z0 = oracle::random_normal(12, rng).reshaped(3, 4);

  SUBCASE("constant field is exact under euler") {
    const Vector c = (Vector(3) << 0.5, -1.0, 2.0).finished();
    const VelocityField f = linear_field(Matrix::Zero(3, 3), c);
    for (int steps : {1, 7, 300}) {
      const Matrix z1 = integrate(f, z0, Direction::forward, euler(steps));
      CHECK(((z1 - z0).colwise() - c).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("exponential decay") {
    const VelocityField f = linear_field(-Matrix::Identity(3, 3));
    const Matrix exact = z0 * std::exp(-1.0);
    CHECK((integrate(f, z0, Direction::forward, euler(300)) - exact).cwiseAbs().maxCoeff() < 1e-2);
    CHECK((integrate(f, z0, Direction::forward, dopri5(1e-6)) - exact).cwiseAbs().maxCoeff() < 1e-6);
    const Matrix back = integrate(f, exact, Direction::reverse, dopri5(1e-6));
    CHECK((back - z0).cwiseAbs().maxCoeff() < 1e-5);
  }
  SUBCASE("forward then reverse round trip") {
    // Time inputs zeroed: the top embedding frequency is 1000, which a random
    // network turns into fast oscillation in t that no 1e-6 run resolves.
    VelocityField f = randomised(3, 4);
    f.mutable_weight(0).rightCols(4).setZero();
    const Matrix z1 = integrate(f, z0, Direction::forward, dopri5(1e-6));
    const Matrix back = integrate(f, z1, Direction::reverse, dopri5(1e-6));
    CHECK((back - z0).colwise().norm().maxCoeff() < 1e-4);
    CHECK((z1 - z0).norm() > 0.1);
  }
  SUBCASE("tighter tolerance reduces the error") {
    const VelocityField f = linear_field(-Matrix::Identity(3, 3));
    const Matrix exact = z0 * std::exp(-1.0);
    double previous = INFINITY;
    for (int k = 0; k < 7; ++k) {
      const double tol = 1e-2 / std::pow(10.0, k);
      const double err = (integrate(f, z0, Direction::forward, dopri5(tol)) - exact).cwiseAbs().maxCoeff();
      CHECK(err <= previous);
      previous = err;
    }
    CHECK(previous < 1e-7);
  }
  SUBCASE("dopri5 step budget") {
    const VelocityField f = randomised(3, 5);
    SolverConfig s = dopri5(1e-12);
    s.max_steps = 3;
    CHECK_THROWS_AS(integrate(f, z0, Direction::forward, s), IntegrationError);
    try {
      integrate(f, z0, Direction::forward, s);
    } catch (const IntegrationError& e) {
      CHECK(e.partial_state().rows() == 3);
      CHECK(e.reached_time() < 1.0);
    }
  }
  SUBCASE("statistics count evaluations") {
    const VelocityField f = linear_field(-Matrix::Identity(3, 3));
    OdeStats stats;
    integrate(f, z0, Direction::forward, euler(10), &stats);
    CHECK(stats.evaluations == 10);
  }
  SolverConfig bad = euler(0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = dopri5(0.0);
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(parse_solver_method("dopri5") == SolverMethod::dopri5);
  CHECK_THROWS_AS(parse_solver_method("rk4"), ConfigError);
}

TEST_CASE("divergence") {
  std::mt19937_64 rng(2);
  const int d = 5;
  const Matrix a = oracle::random_normal(d * d, rng).reshaped(d, d);
  const VelocityField f = linear_field(a);
  const Matrix z = oracle::random_normal(d * 3, rng).reshaped(d, 3);

  SUBCASE("exact trace of a linear field") {
    DivergenceConfig cfg;
    cfg.mode = DivergenceMode::exact;
    const Vector div = divergence(f, z, 0.4, cfg);
    for (int i = 0; i < 3; ++i) CHECK(div[i] == doctest::Approx(a.trace()).epsilon(1e-13));
  }
  SUBCASE("hutchinson within three standard errors") {
    // Var(e^T A e) = sum_{i<j} (A_ij + A_ji)^2 for Rademacher e.
    double var = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) var += (a(i, j) + a(j, i)) * (a(i, j) + a(j, i));
    DivergenceConfig cfg;
    cfg.mode = DivergenceMode::hutchinson;
    cfg.probes = 10000;
    Rng probe_rng = make_rng(9);
    const Vector div = divergence(f, z, 0.4, cfg, &probe_rng);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(div[i] - a.trace()) < 3 * std::sqrt(var / cfg.probes));
  }
  SUBCASE("hutchinson error shrinks like one over root n") {
    const Matrix many = Matrix::Zero(d, 400);
    std::vector<double> counts, rms;
    for (int n : {100, 1000, 10000}) {
      DivergenceConfig cfg;
      cfg.mode = DivergenceMode::hutchinson;
      cfg.probes = n;
      Rng probe_rng = make_rng(10 + n);
      const Vector div = divergence(f, many, 0.0, cfg, &probe_rng);
      counts.push_back(n);
      rms.push_back(std::sqrt((div.array() - a.trace()).square().mean()));
    }
    CHECK(oracle::log_log_slope(counts, rms) == doctest::Approx(-0.5).epsilon(0.1));
  }
  SUBCASE("exact mode matches finite differences on a network") {
    const VelocityField net = randomised(d, 3);
    DivergenceConfig cfg;
    cfg.mode = DivergenceMode::exact;
    const Vector div = divergence(net, z, 0.6, cfg);
    for (int i = 0; i < 3; ++i) {
      const Matrix j = oracle::jacobian([&](const Vector& x) { return Vector(net.forward(x, 0.6)); }, z.col(i), 1e-5);
      CHECK(div[i] == doctest::Approx(j.trace()).epsilon(1e-4));
    }
  }
  SUBCASE("automatic switches at the threshold") {
    DivergenceConfig cfg;
    CHECK(cfg.exact_for(kExactDivergenceMaxDim));
    CHECK_FALSE(cfg.exact_for(kExactDivergenceMaxDim + 1));
    cfg.probes = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("probes are signs") {
    Rng probe_rng = make_rng(1);
    const auto probes = rademacher_probes(4, 6, 3, probe_rng);
    CHECK(probes.size() == 3);
    for (const Matrix& p : probes) CHECK((p.array().abs() == 1.0).all());
  }
}

TEST_CASE("log density of the identity flow") {
  // Zero field: log q(x) = log N(ilr(x); 0, I) - log K / 2 - sum log x, and
  // |ilr(x)|^2 is the Aitchison norm of x.
  std::mt19937_64 rng(3);
  for (int k : {2, 3, 6}) {
    FlowModelSpec spec;
    spec.categories = k;
    FieldArchitecture arch;
    arch.dim = k - 1;
    arch.hidden = {4};
    arch.embed_dim = 2;
    const VelocityField f = VelocityField::zeros(arch);
    std::vector<Composition> xs;
    for (int i = 0; i < 5; ++i) xs.emplace_back(oracle::random_interior(k, rng, 1e-3));
    for (SolverConfig s : {euler(17), dopri5(1e-6)}) {
      const Vector got = log_density_simplex(f, spec, xs, s, DivergenceConfig{});
      for (int i = 0; i < 5; ++i) {
        const Vector& x = xs[i].values();
        const double d = k - 1;
        const double expected = -0.5 * d * std::log(2 * M_PI) - 0.5 * oracle::aitchison_inner(x, x) -
                                0.5 * std::log(static_cast<double>(k)) - x.array().log().sum();
        CHECK(std::abs(got[i] - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
      }
    }
  }
  FlowModelSpec linear;
  linear.map = MapKind::linear;
  linear.categories = 3;
  FieldArchitecture arch;
  arch.dim = 2;
  arch.embed_dim = 2;
  CHECK_THROWS_AS(log_density_simplex(VelocityField::zeros(arch), linear, std::vector<Composition>{},
                                      euler(1), DivergenceConfig{}),
                  ConfigError);
}

TEST_CASE("trained two-category density") {
  TrainConfig cfg;
  cfg.model.categories = 2;
  cfg.batch_size = 128;
  cfg.steps = 1500;
  cfg.hidden = {64, 64};
  cfg.embed_dim = 16;
  cfg.optimizer.learning_rate = 2e-3;
  cfg.seed = 21;
  Rng data_rng = make_rng(21, 1);
  const std::vector<int> labels = sample_categories(CategoricalDistribution({0.5, 0.5}), 20000, data_rng);
  const TrainResult r = train(TrainingData::from_labels(labels, 2), cfg);

  SUBCASE("integrates to one over the interior") {
    const int panels = 500, order = 6;
    const oracle::GaussLegendre gl(order);
    const double a = 1e-4, b = 1 - 1e-4, w = (b - a) / panels;
    std::vector<Composition> xs;
    std::vector<double> weights;
    for (int p = 0; p < panels; ++p)
      for (int i = 0; i < order; ++i) {
        const double x1 = a + (p + 0.5) * w + 0.5 * w * gl.nodes[i];
        xs.emplace_back((Vector(2) << x1, 1 - x1).finished());
        weights.push_back(0.5 * w * gl.weights[i]);
      }
    const Vector logq = log_density_simplex(r.field, cfg.model, xs, dopri5(1e-6), DivergenceConfig{}, 0, 4);
    double total = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) total += weights[i] * std::exp(logq[static_cast<Eigen::Index>(i)]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-2));
  }
  SUBCASE("euler converges to dopri5 at first order") {
    std::mt19937_64 rng(4);
    std::vector<Composition> xs;
    for (int i = 0; i < 20; ++i) xs.emplace_back(oracle::random_interior(2, rng, 0.05));
    const Vector p = log_density_simplex(r.field, cfg.model, xs, dopri5(1e-8), DivergenceConfig{});
    const Vector p6 = log_density_simplex(r.field, cfg.model, xs, dopri5(1e-6), DivergenceConfig{});
    CHECK((p6 - p).cwiseAbs().maxCoeff() < 1e-3);
    const double coarse = (log_density_simplex(r.field, cfg.model, xs, euler(300), DivergenceConfig{}) - p).cwiseAbs().maxCoeff();
    const double fine = (log_density_simplex(r.field, cfg.model, xs, euler(3000), DivergenceConfig{}) - p).cwiseAbs().maxCoeff();
    CHECK(fine / coarse == doctest::Approx(0.1).epsilon(0.5));
  }
  SUBCASE("round trip on the trained field at a tight tolerance") {
    std::mt19937_64 rng(8);
    const Matrix z0 = oracle::random_normal(40, rng).reshaped(1, 40);
    const Matrix z1 = integrate(r.field, z0, Direction::forward, dopri5(1e-7));
    CHECK((integrate(r.field, z1, Direction::reverse, dopri5(1e-7)) - z0).cwiseAbs().maxCoeff() < 1e-4);
  }
  SUBCASE("sampled frequencies are near one half") {
    const SampleResult s = sample(r.field, cfg.model, 4000, euler(100), 5, {false, 2});
    const double ones = std::count(s.categories.begin(), s.categories.end(), 0);
    CHECK(std::abs(ones / 4000 - 0.5) < 3 * std::sqrt(0.25 / 4000) + 0.02);
  }
}

TEST_CASE("categorical estimator with the true mixture density") {
  std::mt19937_64 rng(5);
  for (int k : {2, 3, 8, 16}) {
    for (double lambda : {0.5, 0.7, 0.95}) {
      for (double alpha : {1.5, 10.0, 300.0}) {
        const Vector w = oracle::random_interior(k, rng, 1e-3);
        const CategoricalDistribution p(std::vector<double>(w.data(), w.data() + k));
        InterpolationConfig interp;
        interp.lambda = lambda;
        interp.alpha = alpha;
        const CategoricalEstimate est = estimate_categorical(
            [&](const std::vector<Composition>& xs) {
              Vector out(static_cast<Eigen::Index>(xs.size()));
              for (std::size_t i = 0; i < xs.size(); ++i) out[i] = mixture_logpdf(xs[i], p, interp);
              return out;
            },
            interp, k);
        for (int c = 0; c < k; ++c) {
          CHECK(est.raw[c] == doctest::Approx(p[c]).epsilon(1e-12));
          CHECK(est.normalized[c] == doctest::Approx(p[c]).epsilon(1e-12));
          CHECK((est.records[c].mu.values() - mean_composition(c, lambda, k).values()).norm() == 0.0);
        }
      }
    }
  }
  InterpolationConfig det;
  det.deterministic = true;
  CHECK_THROWS_AS(estimate_categorical([](const std::vector<Composition>&) { return Vector(); }, det, 3),
                  ParameterError);
}

TEST_CASE("metrics") {
  const CategoricalDistribution p({0.75, 0.25}), q({0.5, 0.5});
  CHECK(kl_divergence(p, q) == doctest::Approx(0.75 * std::log(1.5) + 0.25 * std::log(0.5)));
  CHECK(kl_divergence(p, q) == doctest::Approx(0.13081).epsilon(1e-4));
  CHECK(total_variation(p, q) == doctest::Approx(0.25));
  CHECK(kl_divergence(p, p) == 0.0);
  CHECK(total_variation(p, p) == 0.0);
  CHECK_THROWS_AS(kl_divergence(p, CategoricalDistribution({0.2, 0.3, 0.5})), DimensionError);

  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const int k = 2 + i % 9;
    const Vector a = oracle::random_interior(k, rng, 1e-4), b = oracle::random_interior(k, rng, 1e-4);
    const CategoricalDistribution pa(std::vector<double>(a.data(), a.data() + k)),
        pb(std::vector<double>(b.data(), b.data() + k));
    const double kl = kl_divergence(pa, pb);
    CHECK(kl == doctest::Approx(oracle::kl(pa.probs(), pb.probs())));
    CHECK(total_variation(pa, pb) <= std::sqrt(kl / 2) + 1e-12);
  }

  const std::vector<int> samples{0, 0, 0, 1};
  const DistributionMetrics m = eval_metrics(p, samples);
  CHECK(m.kl == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(m.tv == doctest::Approx(0.0).epsilon(1e-9));
  // An unseen category is smoothed, not infinite.
  const DistributionMetrics missing = eval_metrics(p, std::vector<int>{0, 0});
  CHECK(std::isfinite(missing.kl));
  CHECK(missing.kl > 5.0);
}

TEST_CASE("sampler") {
  FieldArchitecture arch;
  arch.dim = 2;
  arch.hidden = {4};
  arch.embed_dim = 2;
  const VelocityField f = VelocityField::zeros(arch);
  FlowModelSpec spec;
  spec.categories = 3;
  const int n = 20000;
  const SampleResult s = sample(f, spec, n, euler(3), 7);
  REQUIRE(s.compositions.size() == static_cast<std::size_t>(n));
  Vector mean = Vector::Zero(3), sq = Vector::Zero(3);
  for (const Composition& x : s.compositions) {
    CHECK_NOTHROW(Composition(x.values()));
    mean += x.values();
    sq += x.values().cwiseProduct(x.values());
  }
  mean /= n;
  const Vector se = ((sq / n - mean.cwiseProduct(mean)) / n).cwiseSqrt();
  for (int i = 0; i < 3; ++i) CHECK(std::abs(mean[i] - 1.0 / 3) < 4 * se[i]);
  for (std::size_t i = 0; i < s.categories.size(); i += 97)
    CHECK(s.categories[i] == argmax_category(s.compositions[i]));

  SampleOptions many;
  many.threads = 4;
  const SampleResult t = sample(f, spec, n, euler(3), 7, many);
  CHECK(t.z1 == s.z1);
  CHECK(t.categories == s.categories);
  CHECK_FALSE(sample(f, spec, n, euler(3), 8).z1 == s.z1);
}
