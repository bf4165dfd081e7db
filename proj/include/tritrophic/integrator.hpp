#pragma once

// Dormand-Prince 5(4) with adaptive steps and continuous output.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tritrophic/errors.hpp"
#include "tritrophic/model.hpp"

namespace tritrophic {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;

  /// Throws ConfigError unless both tolerances lie in (0, 1).
  void validate() const;
};

template <int N>
using VecN = Eigen::Matrix<double, N, 1>;

/// One accepted step and its quartic interpolant.
template <int N>
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  VecN<N> r1, r2, r3, r4, r5;

  double t1() const { return t0 + h; }
  VecN<N> at(double t) const {
    const double s = (t - t0) / h, s1 = 1.0 - s;
    return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
  }
  const VecN<N>& start() const { return r1; }
  VecN<N> end() const { return r1 + r2; }
};

template <int N>
struct Trajectory {
  std::vector<double> t;
  std::vector<VecN<N>> y;
  std::vector<DenseStep<N>> steps;  // steps[i] spans [t[i], t[i+1]]

  /// Continuous output; throws DomainError outside the covered span.
  VecN<N> state_at(double time) const {
    if (steps.empty() || time < t.front() || time > t.back())
      throw DomainError("trajectory does not cover the requested time");
    auto it = std::upper_bound(t.begin(), t.end(), time);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - t.begin() - 1));
    i = std::min(i, steps.size() - 1);
    return steps[i].at(time);
  }
};

/// Integrates y' = f(t, y) from t0 to t1 (t1 > t0). `on_step` sees every
/// accepted step and may return false to stop early. Throws
/// IntegrationError on step underflow, budget overrun or non-finite state.
template <int N, class F, class OnStep>
Trajectory<N> dopri5(F&& f, double t0, const VecN<N>& y0, double t1, const IntegratorConfig& cfg,
                     OnStep&& on_step, bool keep_steps = true) {
  cfg.validate();
  if (!(t1 > t0)) throw DomainError("integration interval must have t1 > t0");
  if (!y0.allFinite()) throw IntegrationError("initial state is not finite");

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  const int n = int(y0.size());
  auto err_norm = [&](const VecN<N>& e, const VecN<N>& ya, const VecN<N>& yb) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc = cfg.atol + cfg.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      acc += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(acc / n);
  };

  Trajectory<N> traj;
  traj.t.push_back(t0);
  traj.y.push_back(y0);

  double t = t0;
  VecN<N> y = y0;
  VecN<N> k1 = f(t, y);
  if (!k1.allFinite()) throw IntegrationError("vector field is not finite at the initial state");

  // Starting step from the scale of y, y' and y''.
  double h;
  {
    const double df0 = err_norm(k1, y, y);
    const double n0 = err_norm(y, y, y);
    double h0 = (n0 < 1e-10 || df0 < 1e-10) ? 1e-6 : 0.01 * n0 / df0;
    h0 = std::min({h0, cfg.max_step, t1 - t0});
    const VecN<N> k2 = f(t + h0, VecN<N>(y + h0 * k1));
    const double d2 = err_norm(VecN<N>(k2 - k1), y, y) / h0;
    const double m = std::max(d2, std::sqrt(df0));
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, cfg.max_step, t1 - t0});
  }

  long steps = 0;
  double fac_old = 1e-4;
  bool rejected = false;
  while (t < t1) {
    if (++steps > cfg.max_steps) throw IntegrationError("step budget exceeded");
    const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    if (h < min_step) throw IntegrationError("step size underflow at t = " + std::to_string(t));
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    const VecN<N> k2 = f(t + c2 * h, VecN<N>(y + h * a21 * k1));
    const VecN<N> k3 = f(t + c3 * h, VecN<N>(y + h * (a31 * k1 + a32 * k2)));
    const VecN<N> k4 = f(t + c4 * h, VecN<N>(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const VecN<N> k5 = f(t + c5 * h, VecN<N>(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const VecN<N> k6 = f(t + h, VecN<N>(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const VecN<N> y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const VecN<N> k7 = f(t + h, y1);
    const VecN<N> e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = y1.allFinite() && k7.allFinite() ? err_norm(e, y, y1) : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      DenseStep<N> ds;
      ds.t0 = t;
      ds.h = h;
      ds.r1 = y;
      ds.r2 = y1 - y;
      ds.r3 = h * k1 - ds.r2;
      ds.r4 = ds.r2 - h * k7 - ds.r3;
      ds.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      t = last ? t1 : t + h;
      y = y1;
      k1 = k7;
      traj.t.push_back(t);
      traj.y.push_back(y);
      const bool go_on = on_step(ds);
      if (keep_steps) traj.steps.push_back(ds);
      if (!go_on) break;
      // Lund stabilisation of the controller, as in the classical code.
      const double fac11 = std::pow(std::max(err, 1e-16), 0.2 - 0.04 * 0.75);
      double fac = fac11 / std::pow(fac_old, 0.04) / 0.9;
      fac = std::clamp(fac, 0.1, 5.0);
      fac_old = std::max(err, 1e-4);
      double hnew = h / fac;
      if (rejected) hnew = std::min(hnew, h);
      rejected = false;
      h = std::min(hnew, cfg.max_step);
    } else {
      if (!std::isfinite(err)) {
        h *= 0.1;
      } else {
        h /= std::min(5.0, std::pow(err, 0.2 - 0.04 * 0.75) / 0.9);
      }
      rejected = true;
    }
  }
  if (!y.allFinite()) throw IntegrationError("state became non-finite");
  return traj;
}

template <int N, class F>
Trajectory<N> dopri5(F&& f, double t0, const VecN<N>& y0, double t1, const IntegratorConfig& cfg) {
  return dopri5<N>(std::forward<F>(f), t0, y0, t1, cfg, [](const DenseStep<N>&) { return true; });
}

/// The food chain from s0 over [t0, t1].
Trajectory<3> integrate(const ModelParams& p, const StateVec& s0, double t0, double t1,
                        const IntegratorConfig& cfg = {});

}  // namespace tritrophic
