#include "simplexflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simplexflow/errors.hpp"

namespace simplexflow {

std::string_view to_string(SolverMethod m) { return m == SolverMethod::euler ? "euler" : "dopri5"; }

SolverMethod parse_solver_method(std::string_view name) {
  if (name == "euler") return SolverMethod::euler;
  if (name == "dopri5" || name == "dormand_prince") return SolverMethod::dopri5;
  throw ConfigError("unknown solver '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (steps < 1) throw ConfigError("euler step count must be >= 1");
  if (!(atol > 0.0) || !(rtol > 0.0)) throw ConfigError("solver tolerances must be positive");
  if (max_steps < 1) throw ConfigError("solver max_steps must be >= 1");
}

namespace {

Matrix solve_euler(const OdeRhs& rhs, Matrix y, double t0, double t1, int steps, OdeStats* stats) {
  const double h = (t1 - t0) / steps;
  for (int i = 0; i < steps; ++i) {
    y += h * rhs(t0 + i * h, y);
    if (stats) {
      ++stats->accepted;
      ++stats->evaluations;
    }
  }
  return y;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;

double scaled_max_norm(const Matrix& err, const Matrix& y0, const Matrix& y1, double atol, double rtol) {
  const Matrix scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
  return err.cwiseQuotient(scale).cwiseAbs().maxCoeff();
}

double scaled_rms(const Matrix& v, const Matrix& y, double atol, double rtol) {
  const Matrix scale = (atol + rtol * y.cwiseAbs().array()).matrix();
  return std::sqrt(v.cwiseQuotient(scale).squaredNorm() / static_cast<double>(std::max<Eigen::Index>(1, v.size())));
}

Matrix solve_dopri5(const OdeRhs& rhs, Matrix y, double t0, double t1, const SolverConfig& cfg, OdeStats* stats) {
  OdeStats local;
  OdeStats& st = stats ? *stats : local;
  const double span = t1 - t0;
  const double dir = span >= 0.0 ? 1.0 : -1.0;
  auto eval = [&](double t, const Matrix& state) {
    ++st.evaluations;
    return rhs(t, state);
  };

  Matrix k1 = eval(t0, y);
  // Initial step guess (Hairer, Norsett & Wanner II.4).
  double h;
  {
    const double d0 = scaled_rms(y, y, cfg.atol, cfg.rtol);
    const double d1 = scaled_rms(k1, y, cfg.atol, cfg.rtol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(span));
    const Matrix k_probe = eval(t0 + dir * h0, y + dir * h0 * k1);
    const double d2 = scaled_rms(k_probe - k1, y, cfg.atol, cfg.rtol) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, std::abs(span)});
  }

  double t = t0;
  double err_prev = 1e-4;
  long attempts = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++attempts > cfg.max_steps)
      throw IntegrationError("dopri5 exceeded max_steps=" + std::to_string(cfg.max_steps) + " at t=" +
                                 std::to_string(t),
                             y, t);
    if (std::abs(t1 - t) <= h * (1.0 + 1e-12)) h = std::abs(t1 - t);
    const double hs = dir * h;
    const Matrix k2 = eval(t + c2 * hs, y + hs * (a21 * k1));
    const Matrix k3 = eval(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const Matrix k4 = eval(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix k5 = eval(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix k6 = eval(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Matrix y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const bool last = std::abs(t1 - (t + hs)) <= 1e-15 * std::max(1.0, std::abs(t1));
    const double t_new = last ? t1 : t + hs;
    Matrix k7 = eval(t_new, y_new);
    const Matrix err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double norm = scaled_max_norm(err, y, y_new, cfg.atol, cfg.rtol);
    if (!std::isfinite(norm)) {
      ++st.rejected;
      h *= kMinFactor;
      continue;
    }
    if (norm <= 1.0) {
      ++st.accepted;
      t = t_new;
      y = std::move(y_new);
      k1 = std::move(k7);
      const double safe_norm = std::max(norm, 1e-10);
      double factor = kSafety * std::pow(safe_norm, -kAlpha) * std::pow(err_prev, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      err_prev = std::max(norm, 1e-4);
      h *= factor;
    } else {
      ++st.rejected;
      h *= std::max(kMinFactor, kSafety * std::pow(norm, -kAlpha));
    }
  }
  return y;
}

}  // namespace

Matrix solve_ode(const OdeRhs& rhs, Matrix y0, double t0, double t1, const SolverConfig& cfg, OdeStats* stats) {
  cfg.validate();
  if (!y0.allFinite()) throw DomainError("solve_ode: non-finite initial state");
  if (t0 == t1) return y0;
  if (cfg.method == SolverMethod::euler) return solve_euler(rhs, std::move(y0), t0, t1, cfg.steps, stats);
  return solve_dopri5(rhs, std::move(y0), t0, t1, cfg, stats);
}

Matrix integrate(const VelocityField& field, const Matrix& z0, Direction direction, const SolverConfig& cfg,
                 OdeStats* stats) {
  if (z0.rows() != field.dim()) throw DimensionError("integrate: state dimension does not match the field");
  const double t0 = direction == Direction::forward ? 0.0 : 1.0;
  const OdeRhs rhs = [&field](double t, const Matrix& z) { return field.forward(z, t); };
  return solve_ode(rhs, z0, t0, 1.0 - t0, cfg, stats);
}

}  // namespace simplexflow
