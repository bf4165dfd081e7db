#pragma once

// Second-order averaging for T-periodic systems in standard form
//
//   z' = eps F1(t, z) + eps^2 F2(t, z) + O(eps^3),
//
// with F10 = <F1> and F20 = <D_z F1 . int_0^s F1 + F2>, plus a damped
// Newton search for zeros of F10 + eps F20 and a sign-change grid scan.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "tritrophic/exec.hpp"
#include "tritrophic/quadrature.hpp"

namespace tritrophic {

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

struct StandardForm {
  VecX f1, f2;
};

struct PeriodicSystem {
  int dimension = 0;
  double period = 0.0;
  std::function<StandardForm(double, const VecX&)> terms;
  /// Optional analytic D_z F1; central differences of terms().f1 otherwise.
  std::function<MatX(double, const VecX&)> dz_f1;
  double fd_step = 1e-6;  // relative to max(1, |z_i|)

  MatX dz_f1_at(double t, const VecX& z) const;
};

struct QuadratureOptions {
  int min_panels = 256;
  int max_doublings = 4;
  double rel_tol = 1e-10;
  InnerRule inner = InnerRule::spectral;
  Exec exec = Exec::serial;
};

/// F1, F2 and D_z F1 sampled at t_j = j T / n (one node per row).
struct IntegrandSamples {
  MatX f1, f2;
  std::vector<MatX> dz_f1;  // empty unless requested
};
IntegrandSamples sample_integrands(const PeriodicSystem& sys, const VecX& z, int n, bool with_jacobian,
                                   Exec exec = Exec::serial);

struct AveragedPair {
  VecX f10, f20;
  int panels = 0;  // grid on which both passed the doubling test
};

/// Throws ConvergenceError if four doublings do not meet rel_tol.
VecX average_first(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt = {});
VecX average_second(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt = {});
AveragedPair average_both(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt = {});

/// Largest |F(t) - F(t + T)| over `samples` points, for both terms.
double periodicity_defect(const PeriodicSystem& sys, const VecX& z, int samples = 16);

/// F10 + eps F20 as plain functions of z.
struct AveragedField {
  int dimension = 0;
  std::function<VecX(const VecX&)> f10;  // empty: identically zero
  std::function<VecX(const VecX&)> f20;
  double epsilon = 1.0;
  /// Optional analytic Jacobian of the whole field.
  std::function<MatX(const VecX&)> jacobian;
  double fd_step = 1e-6;

  VecX value(const VecX& z) const;
  MatX jacobian_at(const VecX& z) const;
  /// Finite-difference Jacobian, whether or not an analytic one is set.
  MatX fd_jacobian(const VecX& z) const;
};

struct NewtonOptions {
  int max_iterations = 100;
  int max_halvings = 20;
  double residual_tol = 1e-9;  // relative to the field scale at the iterate
  double dedupe_distance = 1e-6;
  double degree_tol = 1e-8;
};

struct AveragedZero {
  VecX z0;
  std::vector<std::complex<double>> eigenvalues;
  double determinant = 0.0;
  bool degree_nonzero = false;
  double residual = 0.0;  // sup-norm of the field at z0
  int iterations = 0;
  std::size_t seed_index = 0;
};

struct SeedFailure {
  std::size_t seed_index;
  std::string reason;
};

struct ZeroSearch {
  std::vector<AveragedZero> zeros;
  std::vector<SeedFailure> failures;
};

/// Scale used by the residual test: 1 + |J|_inf |z|_inf.
double field_scale(const MatX& jac, const VecX& z);

/// Damped Newton from each seed; per-seed failures are recorded.
ZeroSearch find_zeros(const AveragedField& field, const std::vector<VecX>& seeds, const NewtonOptions& opt = {},
                      Exec exec = Exec::serial);

/// Eigenvalues of a 2x2 matrix by the quadratic formula.
std::array<std::complex<double>, 2> eigenvalues_2x2(const Eigen::Matrix2d& m);
std::vector<std::complex<double>> eigenvalues_of(const MatX& m);

/// Uniform grid over a rectangle in the (r, w) plane.
struct Grid2 {
  double x_min = 0.1, x_max = 400.0;
  int nx = 400;
  double y_min = -100.0, y_max = 100.0;
  int ny = 200;
  double x(int i) const { return x_min + (x_max - x_min) * double(i) / double(nx - 1); }
  double y(int j) const { return y_min + (y_max - y_min) * double(j) / double(ny - 1); }
};

/// Cells in which every component of a 2D field takes both signs at the
/// corners. Each cell center is a candidate zero.
struct SignChangeCell {
  int i, j;
  Eigen::Vector2d center;
};
std::vector<SignChangeCell> sign_change_scan(const std::function<Eigen::Vector2d(double, double)>& field,
                                             const Grid2& grid, Exec exec = Exec::serial);

}  // namespace tritrophic
