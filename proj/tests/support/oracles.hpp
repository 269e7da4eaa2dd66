#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numerical routines.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Random interior point: normalised exponentials, each component at least `floor`.
inline Vec random_interior(int k, std::mt19937_64& rng, double floor = 1e-6) {
  std::exponential_distribution<double> e(1.0);
  Vec v(k);
  for (int i = 0; i < k; ++i) v[i] = e(rng);
  v /= v.sum();
  v = (v.array() * (1.0 - k * floor) + floor).matrix();
  return v / v.sum();
}

inline Vec random_normal(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

// Central differences with h = 1e-6 * max(1, |x_i|).
inline Mat jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double rel = 1e-6) {
  const Vec f0 = f(x);
  Mat j(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = rel * std::max(1.0, std::abs(x[i]));
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    j.col(i) = (f(xp) - f(xm)) / (2 * h);
  }
  return j;
}

inline double log_abs_det(const Mat& m) {
  const Eigen::PartialPivLU<Mat> lu(m);
  return lu.matrixLU().diagonal().array().abs().log().sum();
}

// Completes the first D coordinates of a composition with x_K = 1 - sum.
inline Vec complete(const Vec& head) {
  Vec x(head.size() + 1);
  x.head(head.size()) = head;
  x[head.size()] = 1.0 - head.sum();
  return x;
}

// (1/2K) sum_{i,j} log(x_i/x_j) log(y_i/y_j).
inline double aitchison_inner(const Vec& x, const Vec& y) {
  const Eigen::Index k = x.size();
  double s = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) s += std::log(x[i] / x[j]) * std::log(y[i] / y[j]);
  return s / (2.0 * static_cast<double>(k));
}

// Minimum of sum_i cost(i, sigma(i)) over all permutations.
inline double brute_force_assignment(const Mat& cost) {
  std::vector<int> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double c = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) c += cost(static_cast<Eigen::Index>(i), perm[i]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// sum_{n >= 0} 1 / (x + n)^2, with the Euler-Maclaurin tail after N terms.
inline double trigamma_series(double x, int terms = 100000) {
  double s = 0.0;
  for (int n = 0; n < terms; ++n) s += 1.0 / ((x + n) * (x + n));
  const double a = x + terms;
  return s + 1.0 / a + 1.0 / (2 * a * a) + 1.0 / (6 * a * a * a);
}

// Gauss-Legendre nodes and weights on [-1, 1] via Newton on P_n.
struct GaussLegendre {
  std::vector<double> nodes, weights;
  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[i] = x;
      weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

// Composite Gauss-Legendre over [a, b].
inline double integrate_1d(const std::function<double(double)>& f, double a, double b, int panels,
                           int order = 8) {
  const GaussLegendre gl(order);
  const double w = (b - a) / panels;
  double s = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (int i = 0; i < order; ++i) s += gl.weights[i] * f(mid + 0.5 * w * gl.nodes[i]);
  }
  return 0.5 * w * s;
}

// Integral over the 2-simplex {x1, x2 > 0, x1 + x2 < 1} of f(x1, x2), using
// x2 = (1 - x1) u.
inline double integrate_triangle(const std::function<double(double, double)>& f, int panels, int order = 6) {
  return integrate_1d(
      [&](double x1) {
        const double len = 1.0 - x1;
        return len * integrate_1d([&](double u) { return f(x1, len * u); }, 0.0, 1.0, panels, order);
      },
      0.0, 1.0, panels, order);
}

// KL(p || q) with the convention 0 log 0 = 0.
inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0) s += p[i] * std::log(p[i] / q[i]);
  return s;
}

// Least-squares slope of log y against log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
