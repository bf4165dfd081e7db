#pragma once

// Coordinate pipeline that brings the food chain near p3 into the standard
// form of averaging:
//
//   1. translate p3 to the origin,            (X, Y, Z) = (x, y, z) - p3
//   2. real Jordan form of the linear part,   (X, Y, Z) = M (U, V, W)
//   3. cylindrical coordinates,               U = R cos(theta), V = R sin(theta)
//   4. rescale,                               (R, W) = eps (r, w)
//   5. take theta as the independent variable: r' = dr/dtheta, w' = dw/dtheta
//
// giving r' = eps F11 + eps^2 F21 + O(eps^3), w' = eps F12 + eps^2 F22 + O(eps^3).
// The coefficients are obtained by running the exact maps on truncated
// series in eps (see extract_series), not from a symbolic expansion.

#include <cmath>
#include <numbers>

#include "tritrophic/hopf.hpp"
#include "tritrophic/model.hpp"
#include "tritrophic/taylor.hpp"

namespace tritrophic {

/// Intermediates of the linear change of variables.
struct TransformAux {
  double F, G, H, I;
};

/// Cylindrical state in the rescaled frame; r >= 0, theta in [0, 2 pi).
struct CylState {
  double r = 0.0;
  double theta = 0.0;
  double w = 0.0;
};

/// Nonzero entries of M = [[u_x, 0, 1], [u_y, 1, w_y], [0, 0, G]].
template <class T>
struct LinearChange {
  T u_x, u_y, w_y, G;
};

template <class T>
LinearChange<T> linear_change(const HopfSetup& s, double k, const T& eps) {
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1, l = s.l, m = s.m;
  const T e2 = eps * eps;
  const T F = sqrt_of(k * (b1 * d1 - e2 * k * l * (l * e2 - 2.0 * a1 + 2.0 * d1)));
  const T H = b2 * k * d1 * d1 * d1 + a1 * (b1 * b1 - 2.0 * e2 * k * l * b1 - 2.0 * b2 * d1 * k) * d1 +
              a1 * a1 * k * (2.0 * b1 * l * e2 + b2 * d1);
  const T I = k * (m * (m - 2.0 * l) * e2 + 2.0 * a1 * l - 2.0 * d1 * l) * e2 + b1 * d1;
  const T G = H * I / (a1 * a2 * b1 * d1 * k * (2.0 * (a1 - d1) * k * l * e2 + b1 * d1));
  return {-d1 * k / F, -e2 * k * l / F, e2 * (2.0 * l - m) / d1, G};
}

/// Applies M^{-1} to (dx, dy, dz); M's structure gives a closed form.
template <class T>
std::array<T, 3> to_jordan(const LinearChange<T>& M, const T& dx, const T& dy, const T& dz) {
  const T W = dz / M.G;
  const T U = (dx - W) / M.u_x;
  const T V = dy - M.u_y * U - M.w_y * W;
  return {U, V, W};
}

struct PolarRates {
  double r_dot, theta_dot, w_dot;
};

struct ThetaRates {
  double dr_dtheta, dw_dtheta;
};

/// The exact pipeline at one finite epsilon.
class NormalFormTransform {
 public:
  /// Throws ConstraintViolation for an invalid setup and SingularMatrixError
  /// if the change of variables is numerically singular.
  NormalFormTransform(const HopfSetup& setup, double epsilon);

  double epsilon() const { return eps_; }
  const HopfSetup& setup() const { return setup_; }
  const ModelParams& params() const { return params_; }
  const StateVec& p3() const { return p3_; }
  const Matrix3& matrix() const { return M_; }
  const Matrix3& inverse_matrix() const { return Minv_; }
  TransformAux aux() const { return aux_; }

  /// (x, y, z) -> (r, theta, w). Requires epsilon > 0.
  CylState forward(const StateVec& s) const;
  /// (r, theta, w) -> (x, y, z). Requires epsilon > 0.
  StateVec inverse(const CylState& c) const;

  /// (U, V, W) <-> (x, y, z) without the polar/rescaling steps.
  Eigen::Vector3d to_jordan(const StateVec& s) const { return Minv_ * (s - p3_); }
  StateVec from_jordan(const Eigen::Vector3d& uvw) const { return p3_ + M_ * uvw; }

  /// Time derivatives of (r, theta, w). Requires r > 0.
  PolarRates polar_rates(const CylState& c) const;

  /// (dr/dtheta, dw/dtheta) exactly (no truncation). Throws
  /// ReparametrizationError if |theta_dot| < 1e-10.
  ThetaRates theta_dynamics(const CylState& c) const;

 private:
  void require_positive_epsilon() const;

  HopfSetup setup_;
  double eps_;
  ModelParams params_;
  StateVec p3_;
  Matrix3 M_, Minv_;
  TransformAux aux_;
};

TransformAux transform_aux(const HopfSetup& s, double epsilon);

CylState forward_map(const HopfSetup& s, const StateVec& x);
StateVec inverse_map(const HopfSetup& s, const CylState& c);
ThetaRates theta_dynamics(const HopfSetup& s, const CylState& c, double epsilon);

/// Coefficients of the standard form at one (theta, r, w).
struct SeriesCoefficients {
  double F11, F21, F12, F22;
  double F31, F32;  // third order, for truncation estimates
  double T0, T1;    // theta_dot = T0 + eps T1 + O(eps^2)
};

/// Exact-to-rounding coefficients from the pipeline evaluated on truncated
/// series in eps. Requires r > 0.
SeriesCoefficients extract_series(const HopfSetup& s, double theta, double r, double w);

/// Richardson alternative: polynomial extrapolation of theta_dynamics at
/// eps = h, h/2, h/4 (and h/2, h/4, h/8 for the residual). Throws
/// ConvergenceError if the two fits disagree by more than rel_tol of the
/// leading term.
struct RichardsonSeries {
  double F11, F21, F12, F22;
  double residual;  // relative disagreement between the two fits
};
RichardsonSeries extract_series_richardson(const HopfSetup& s, double theta, double r, double w,
                                           double h = 1e-2, double rel_tol = 1e-6);

/// Angular frequency at eps = 0: sqrt(b1 d1 / k).
double linear_frequency(const HopfSetup& s);

/// theta_dot at eps = 0: -sqrt(b1 d1 k)/k.
double theta_rate_T0(const HopfSetup& s);

}  // namespace tritrophic
