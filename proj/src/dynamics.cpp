#include "tritrophic/dynamics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "tritrophic/errors.hpp"
#include "tritrophic/equilibria.hpp"
#include "tritrophic/transform.hpp"

namespace tritrophic {

namespace {

using Var = VecN<14>;  // state, fundamental matrix (column-major), two quadratures

Var variational_start(const StateVec& x) {
  Var v = Var::Zero();
  v.head<3>() = x;
  v[3] = v[7] = v[11] = 1.0;
  return v;
}

auto variational_rhs(const ModelParams& p) {
  return [&p](double, const Var& v) {
    const StateVec x = v.head<3>();
    const auto f = food_chain_rhs(p, x[0], x[1], x[2]);
    const Matrix3 J = jacobian(p, x);
    const Eigen::Map<const Matrix3> Phi(v.data() + 3);
    Var out;
    out.head<3>() << f[0], f[1], f[2];
    Eigen::Map<Matrix3>(out.data() + 3) = J * Phi;
    out[12] = J.trace();
    out[13] = p.a2 * x[1] / (p.b2 + x[1]) - p.d2;
    return out;
  };
}

StateVec field_at(const ModelParams& p, const StateVec& x) {
  const auto f = food_chain_rhs(p, x[0], x[1], x[2]);
  return {f[0], f[1], f[2]};
}

Var flow_with_variations(const ModelParams& p, const StateVec& x, double T, const IntegratorConfig& cfg) {
  const Trajectory<14> tr = dopri5<14>(
      variational_rhs(p), 0.0, variational_start(x), T, cfg, [](const DenseStep<14>&) { return true; }, false);
  return tr.y.back();
}

// Root of g on [0, 1] with g(0) < 0 <= g(1), by the Illinois variant of
// regula falsi.
template <class G>
double section_root(G&& g) {
  double a = 0.0, b = 1.0, ga = g(a), gb = g(b);
  int side = 0;
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    const double c = (a * gb - b * ga) / (gb - ga);
    const double gc = g(c);
    if (gc == 0.0) return c;
    if ((gc < 0.0) == (ga < 0.0)) {
      a = c;
      ga = gc;
      if (side == -1) gb *= 0.5;
      side = -1;
    } else {
      b = c;
      gb = gc;
      if (side == 1) ga *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

double p3_scale(const ModelParams& p) { return std::max(1.0, p3_state(p).cwiseAbs().maxCoeff()); }

}  // namespace

Monodromy monodromy(const ModelParams& p, const StateVec& cycle_point, double period, const IntegratorConfig& cfg,
                    double trivial_tol) {
  validate(p);
  if (!(period > 0.0)) throw DomainError("monodromy needs a positive period");
  const Var end = flow_with_variations(p, cycle_point, period, cfg);
  Monodromy m{};
  m.matrix = Eigen::Map<const Matrix3>(end.data() + 3);
  m.end_state = end.head<3>();
  m.trace_integral = end[12];
  m.z_growth_integral = end[13];

  Eigen::EigenSolver<Matrix3> es(m.matrix, false);
  std::array<std::complex<double>, 3> mu{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
  std::size_t trivial = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(mu[i] - 1.0) < std::abs(mu[trivial] - 1.0)) trivial = i;
  m.trivial_defect = std::abs(mu[trivial] - 1.0);
  m.multipliers[0] = mu[trivial];
  for (std::size_t i = 0, j = 1; i < 3; ++i)
    if (i != trivial) m.multipliers[j++] = mu[i];
  if (m.trivial_defect > trivial_tol)
    throw ConvergenceError("no Floquet multiplier within " + std::to_string(trivial_tol) +
                           " of 1; the input is not a periodic orbit");
  return m;
}

PoincareRecord poincare_verify(const HopfSetup& setup, const CyclePrediction& pred, double epsilon,
                               const IntegratorConfig& cfg, const VerifyOptions& opt) {
  if (!pred.exists) throw DomainError("prediction does not exist (" + pred.failing_radicand + " <= 0)");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0: the rescaling by eps is undefined at 0");
  HopfSetup s = setup;
  s.epsilon = epsilon;
  const NormalFormTransform nf(s, epsilon);
  const ModelParams& p = nf.params();
  const double scale = p3_scale(p);
  const double box = opt.box_factor * scale;

  PoincareRecord rec;
  rec.branch = pred.branch;
  rec.epsilon = epsilon;
  rec.predicted = nf.inverse({pred.zero[0], 0.0, pred.zero[1]});
  rec.linear_period = 2.0 * std::numbers::pi / linear_frequency(s);
  const StateVec f0 = field_at(p, rec.predicted);
  if (!(f0.norm() > 0.0)) throw DomainError("predicted point is an equilibrium");
  rec.section = {rec.predicted, f0.normalized()};
  const bool in_plane = rec.predicted[2] == 0.0;

  // Plain returns to the section from the predicted point.
  {
    auto rhs = [&p](double, const VecN<3>& x) { return field_at(p, x); };
    bool left_box = false;
    double g_prev = 0.0;
    bool first = true;
    auto on_step = [&](const DenseStep<3>& ds) {
      const StateVec y1 = ds.end();
      if ((y1.cwiseAbs().array() > box).any()) {
        left_box = true;
        return false;
      }
      const double g1 = rec.section.signed_distance(y1);
      // Skip the departure: the flow leaves the section with g > 0.
      if (!first && g_prev < 0.0 && g1 >= 0.0) {
        const double sr = section_root([&](double u) { return rec.section.signed_distance(ds.at(ds.t0 + u * ds.h)); });
        const double tc = ds.t0 + sr * ds.h;
        rec.return_times.push_back(tc);
        rec.return_points.push_back(ds.at(tc));
      }
      if (g1 > 0.0) first = false;
      g_prev = g1;
      return int(rec.return_points.size()) < opt.crossings;
    };
    const double horizon = (opt.crossings + 2) * rec.linear_period;
    dopri5<3>(rhs, 0.0, rec.predicted, horizon, cfg, on_step, false);
    if (left_box) throw IntegrationError("trajectory left the bounding box before returning to the section");
    if (rec.return_points.empty()) throw IntegrationError("no return to the section");
  }

  // Shooting Newton on (x, T) with the section as the phase condition.
  StateVec x = rec.predicted;
  const double T_first = rec.return_times.front();
  double T = T_first;
  bool done = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Var end = flow_with_variations(p, x, T, cfg);
    const StateVec phi = end.head<3>();
    if (!phi.allFinite() || (phi.cwiseAbs().array() > box).any())
      throw IntegrationError("shooting trajectory left the bounding box");
    const Matrix3 Phi = Eigen::Map<const Matrix3>(end.data() + 3);
    Eigen::Vector4d R;
    R.head<3>() = phi - x;
    R[3] = rec.section.signed_distance(x);
    rec.iterations = it;
    rec.closure = R.head<3>().norm();
    if (R.cwiseAbs().maxCoeff() <= opt.tol * scale) {
      done = true;
      break;
    }
    Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
    A.topLeftCorner<3, 3>() = Phi - Matrix3::Identity();
    A.topRightCorner<3, 1>() = field_at(p, phi);
    A.bottomLeftCorner<1, 3>() = rec.section.normal.transpose();
    if (in_plane) {
      // z = 0 is invariant: search inside it so the cycle stays there exactly.
      A.row(2).setZero();
      A(2, 2) = 1.0;
      R[2] = 0.0;
    }
    const Eigen::Vector4d step = A.fullPivLu().solve(-R);
    if (!step.allFinite()) throw ConvergenceError("singular shooting system");
    x += step.head<3>();
    if (in_plane) x[2] = 0.0;
    T += step[3];
    // T -> 0 also solves the shooting equations; stay near the first return.
    if (!(T > 0.5 * T_first && T < 2.0 * T_first))
      throw ConvergenceError("shooting drifted away from the first-return period");
  }
  if (!done) throw ConvergenceError("periodic orbit not found within " + std::to_string(opt.max_iterations) +
                                    " shooting iterations");

  rec.cycle_point = x;
  rec.period = T;
  rec.distance = (x - rec.predicted).norm();
  rec.floquet = monodromy(p, x, T, cfg);
  rec.nontrivial = {rec.floquet.multipliers[1], rec.floquet.multipliers[2]};

  // Return map in an orthonormal basis of the section.
  {
    const StateVec n = rec.section.normal;
    Eigen::Matrix<double, 3, 2> E;
    E.col(0) = n.unitOrthogonal();
    E.col(1) = n.cross(StateVec(E.col(0)));
    const StateVec fx = field_at(p, x);
    const Matrix3 proj = Matrix3::Identity() - fx * n.transpose() / n.dot(fx);
    rec.return_map_jacobian = E.transpose() * proj * rec.floquet.matrix * E;
  }

  // z range over one period, sampling each step's interpolant.
  {
    rec.z_min = rec.z_max = x[2];
    auto rhs = [&p](double, const VecN<3>& y) { return field_at(p, y); };
    auto on_step = [&](const DenseStep<3>& ds) {
      for (int q = 1; q <= 4; ++q) {
        const double z = ds.at(ds.t0 + 0.25 * q * ds.h)[2];
        rec.z_min = std::min(rec.z_min, z);
        rec.z_max = std::max(rec.z_max, z);
      }
      return true;
    };
    dopri5<3>(rhs, 0.0, x, T, cfg, on_step, false);
  }
  return rec;
}

ScanResult verify_scan(const HopfSetup& setup, const CyclePrediction& pred, const std::vector<double>& eps,
                       const IntegratorConfig& cfg, const VerifyOptions& opt, Exec exec) {
  ScanResult out;
  out.branch = pred.branch;
  out.entries.resize(eps.size());
  const auto count = static_cast<std::ptrdiff_t>(eps.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    ScanEntry& e = out.entries[static_cast<std::size_t>(i)];
    e.epsilon = eps[static_cast<std::size_t>(i)];
    try {
      e.record = poincare_verify(setup, pred, e.epsilon, cfg, opt);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  }
  const ScanEntry* prev = nullptr;
  for (const ScanEntry& e : out.entries) {
    if (!e.record) continue;
    if (prev) {
      const double p = std::log(prev->record->distance / e.record->distance) / std::log(prev->epsilon / e.epsilon);
      out.orders.push_back(p);
      out.halving_ratios.push_back(std::pow(2.0, p));
    }
    prev = &e;
  }
  return out;
}

}  // namespace tritrophic
