#include "tritrophic/transform.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "tritrophic/equilibria.hpp"
#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double k_of(const HopfSetup& s) { return s.k_override ? *s.k_override : degenerate_k(s); }

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t >= kTwoPi ? 0.0 : t;
}

}  // namespace

TransformAux transform_aux(const HopfSetup& s, double epsilon) {
  validate(s);
  const double k = k_of(s);
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1, l = s.l, m = s.m;
  const double e2 = epsilon * epsilon;
  TransformAux aux{};
  const double radicand = k * (b1 * d1 - e2 * k * l * (l * e2 - 2.0 * a1 + 2.0 * d1));
  aux.F = radicand > 0.0 ? std::sqrt(radicand) : std::nan("");
  aux.H = b2 * k * d1 * d1 * d1 + a1 * (b1 * b1 - 2.0 * e2 * k * l * b1 - 2.0 * b2 * d1 * k) * d1 +
          a1 * a1 * k * (2.0 * b1 * l * e2 + b2 * d1);
  aux.I = k * (m * (m - 2.0 * l) * e2 + 2.0 * a1 * l - 2.0 * d1 * l) * e2 + b1 * d1;
  aux.G = aux.H * aux.I / (a1 * a2 * b1 * d1 * k * (2.0 * (a1 - d1) * k * l * e2 + b1 * d1));
  return aux;
}

NormalFormTransform::NormalFormTransform(const HopfSetup& setup, double epsilon)
    : setup_(setup), eps_(epsilon) {
  HopfSetup at_eps = setup;
  at_eps.epsilon = epsilon;
  params_ = solve_constraints(at_eps);
  p3_ = p3_state(params_);
  aux_ = transform_aux(at_eps, epsilon);
  if (!(aux_.F > 0.0)) throw SingularMatrixError("change of variables: F is not real and positive");

  const auto L = linear_change(at_eps, params_.k, epsilon);
  M_ << L.u_x, 0.0, 1.0, L.u_y, 1.0, L.w_y, 0.0, 0.0, L.G;
  const double det = M_.determinant();
  const double scale = M_.cwiseAbs().maxCoeff();
  if (!std::isfinite(det) || std::abs(det) < 1e-12 * scale * scale * scale)
    throw SingularMatrixError("change of variables is numerically singular");
  // Closed-form inverse of the block structure.
  Minv_.setZero();
  Minv_(2, 2) = 1.0 / L.G;
  Minv_(0, 0) = 1.0 / L.u_x;
  Minv_(0, 2) = -Minv_(2, 2) / L.u_x;
  Minv_(1, 0) = -L.u_y * Minv_(0, 0);
  Minv_(1, 1) = 1.0;
  Minv_(1, 2) = -L.u_y * Minv_(0, 2) - L.w_y * Minv_(2, 2);
}

void NormalFormTransform::require_positive_epsilon() const {
  if (!(eps_ > 0.0)) throw DomainError("the rescaling (R, W) = eps (r, w) needs eps > 0");
}

CylState NormalFormTransform::forward(const StateVec& s) const {
  require_positive_epsilon();
  const Eigen::Vector3d uvw = to_jordan(s);
  const double R = std::hypot(uvw[0], uvw[1]);
  const double theta = R == 0.0 ? 0.0 : wrap_angle(std::atan2(uvw[1], uvw[0]));
  return {R / eps_, theta, uvw[2] / eps_};
}

StateVec NormalFormTransform::inverse(const CylState& c) const {
  require_positive_epsilon();
  const double R = eps_ * c.r;
  return from_jordan({R * std::cos(c.theta), R * std::sin(c.theta), eps_ * c.w});
}

PolarRates NormalFormTransform::polar_rates(const CylState& c) const {
  require_positive_epsilon();
  if (!(c.r > 0.0)) throw DomainError("polar rates need r > 0");
  const StateVec s = inverse(c);
  const Eigen::Vector3d d = Minv_ * vector_field(params_, s);
  const double cs = std::cos(c.theta), sn = std::sin(c.theta);
  const double R = eps_ * c.r;
  return {(cs * d[0] + sn * d[1]) / eps_, (cs * d[1] - sn * d[0]) / R, d[2] / eps_};
}

ThetaRates NormalFormTransform::theta_dynamics(const CylState& c) const {
  const PolarRates pr = polar_rates(c);
  if (!(std::abs(pr.theta_dot) >= 1e-10))
    throw ReparametrizationError("theta_dot vanishes; time-to-angle change invalid");
  return {pr.r_dot / pr.theta_dot, pr.w_dot / pr.theta_dot};
}

CylState forward_map(const HopfSetup& s, const StateVec& x) {
  return NormalFormTransform(s, s.epsilon).forward(x);
}

StateVec inverse_map(const HopfSetup& s, const CylState& c) {
  return NormalFormTransform(s, s.epsilon).inverse(c);
}

ThetaRates theta_dynamics(const HopfSetup& s, const CylState& c, double epsilon) {
  return NormalFormTransform(s, epsilon).theta_dynamics(c);
}

SeriesCoefficients extract_series(const HopfSetup& s, double theta, double r, double w) {
  validate(s);
  if (!(r > 0.0)) throw DomainError("series extraction needs r > 0");
  using J = Taylor<5>;
  const J eps = J::variable(0.0);
  const auto p = constrained_params(s, eps);
  const auto p3 = p3_generic(p);
  const auto M = linear_change(s, p.k.value(), eps);

  const double cs = std::cos(theta), sn = std::sin(theta);
  const J U = eps * (r * cs), V = eps * (r * sn), W = eps * w;
  const J x = p3[0] + M.u_x * U + W;
  const J y = p3[1] + M.u_y * U + V + M.w_y * W;
  const J z = M.G * W;
  const auto f = food_chain_rhs(p, x, y, z);
  const auto d = to_jordan(M, f[0], f[1], f[2]);

  // The eps^0 terms vanish at p3; dividing by eps drops their rounding.
  const J r_dot = (cs * d[0] + sn * d[1]).shifted();
  const J theta_dot = (cs * d[1] - sn * d[0]).shifted() / r;
  const J w_dot = d[2].shifted();
  if (!(std::abs(theta_dot[0]) >= 1e-10)) throw ReparametrizationError("T0 vanishes");
  // Only the first N-1 = 4 coefficients are valid after the shift.
  const J r_prime = r_dot / theta_dot;
  const J w_prime = w_dot / theta_dot;
  return {r_prime[1], r_prime[2], w_prime[1], w_prime[2], r_prime[3], w_prime[3], theta_dot[0], theta_dot[1]};
}

RichardsonSeries extract_series_richardson(const HopfSetup& s, double theta, double r, double w, double h,
                                           double rel_tol) {
  const CylState c{r, theta, w};
  double gr[4], gw[4], e[4];
  for (int i = 0; i < 4; ++i) {
    e[i] = h / double(1 << i);
    const ThetaRates tr = NormalFormTransform(s, e[i]).theta_dynamics(c);
    gr[i] = tr.dr_dtheta / e[i];
    gw[i] = tr.dw_dtheta / e[i];
  }
  // Quadratic through three points: returns (value at 0, slope at 0).
  auto fit = [&](const double* g, int i0) {
    const double x0 = e[i0], x1 = e[i0 + 1], x2 = e[i0 + 2];
    const double y0 = g[i0], y1 = g[i0 + 1], y2 = g[i0 + 2];
    const double L0 = x1 * x2 / ((x0 - x1) * (x0 - x2));
    const double L1 = x0 * x2 / ((x1 - x0) * (x1 - x2));
    const double L2 = x0 * x1 / ((x2 - x0) * (x2 - x1));
    const double D0 = -(x1 + x2) / ((x0 - x1) * (x0 - x2));
    const double D1 = -(x0 + x2) / ((x1 - x0) * (x1 - x2));
    const double D2 = -(x0 + x1) / ((x2 - x0) * (x2 - x1));
    return std::pair{L0 * y0 + L1 * y1 + L2 * y2, D0 * y0 + D1 * y1 + D2 * y2};
  };
  const auto [r0a, r1a] = fit(gr, 0);
  const auto [r0b, r1b] = fit(gr, 1);
  const auto [w0a, w1a] = fit(gw, 0);
  const auto [w0b, w1b] = fit(gw, 1);
  const double lead = std::abs(r0b) + h * std::abs(r1b) + std::abs(w0b) + h * std::abs(w1b);
  const double diff = std::abs(r0a - r0b) + h * std::abs(r1a - r1b) + std::abs(w0a - w0b) + h * std::abs(w1a - w1b);
  RichardsonSeries out{r0b, r1b, w0b, w1b, lead > 0.0 ? diff / lead : diff};
  if (out.residual > rel_tol)
    throw ConvergenceError("Richardson series extraction is ill-conditioned (residual " +
                           std::to_string(out.residual) + ")");
  return out;
}

double linear_frequency(const HopfSetup& s) { return std::sqrt(s.b1 * s.d1 / k_of(s)); }

double theta_rate_T0(const HopfSetup& s) {
  const double k = k_of(s);
  return -std::sqrt(s.b1 * s.d1 * k) / k;
}

}  // namespace tritrophic
