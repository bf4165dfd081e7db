#pragma once

// Spectrum at p3 and the degenerate-Hopf parameter constraints.
//
// Re(lambda+-) = eps^2 l and mu = eps^2 m are solved for (rho, d2); k is
// fixed so that the first-order averaged function vanishes identically.

#include <complex>
#include <optional>

#include "tritrophic/model.hpp"
#include "tritrophic/taylor.hpp"

namespace tritrophic {

struct SpectrumAtP3 {
  std::complex<double> lambda_plus, lambda_minus;
  double mu;
  double Delta;  // discriminant of the (x, y) block
};

/// Closed-form eigenvalues at p3. Throws DomainError if a1 == d1 or the
/// mu denominator vanishes.
SpectrumAtP3 spectrum_p3(const ModelParams& p);

struct HopfSetup {
  double a1, a2, b1, b2, d1;  // free parameters
  double l = 0.0;             // unfolding of Re(lambda+-)
  double m = 0.0;             // unfolding of mu
  double epsilon = 0.0;
  /// Replaces the degenerate value of k. Off the degenerate value the
  /// first-order averaged function no longer vanishes; only used to
  /// explore that structure.
  std::optional<double> k_override;
};

/// Values fixed by the constraints for a given epsilon.
struct ConstrainedValues {
  double k, rho, d2;
  double E;          // eps^2 coefficient of the d2 numerator
  double l3_margin;  // a1 b1 - 2 b2 d1, must be > 0
};

/// k = 2 a1 b1^2 d1 / ((a1-d1)^2 (a1 b1 - 2 b2 d1)).
double degenerate_k(const HopfSetup& s);

/// Throws ConstraintViolation unless the free parameters are positive,
/// a1 > d1, a1 b1 - 2 b2 d1 > 0 and epsilon >= 0.
void validate(const HopfSetup& s);

ConstrainedValues constrained_values(const HopfSetup& s);

/// Full parameter set satisfying the constraints at s.epsilon. Throws
/// ConstraintViolation if a derived value is not positive.
ModelParams solve_constraints(const HopfSetup& s);

/// The eigenvalues expected at p3 of the constrained system:
/// eps^2 l +- sqrt(k (eps^2 k l (l eps^2 - 2 a1 + 2 d1) - b1 d1))/k and eps^2 m.
struct ExpectedSpectrum {
  std::complex<double> lambda_plus, lambda_minus;
  double mu;
};
ExpectedSpectrum expected_spectrum(const HopfSetup& s);

/// d2 in the form printed without the common factor d1.
double d2_reduced_form(double a1, double a2, double b1, double b2, double d1, double k);

/// Relative residuals of the four degenerate-Hopf conditions at eps = 0
/// (the last entry is -(a1 b1 - 2 b2 d1), which must be negative).
struct DegeneracyCheck {
  double d2_residual, rho_residual, k_residual, l3_margin;
  bool satisfied(double tol = 1e-12) const {
    return d2_residual <= tol && rho_residual <= tol && k_residual <= tol && l3_margin > 0.0;
  }
};
DegeneracyCheck check_degeneracy(const ModelParams& p);

/// Generic version of solve_constraints: rho and d2 as functions of eps.
template <class T>
BasicParams<T> constrained_params(const HopfSetup& s, const T& eps) {
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1, l = s.l, m = s.m;
  const double k = s.k_override ? *s.k_override : degenerate_k(s);
  const T e2 = eps * eps;
  const double E = -b2 * k * m * d1 * d1 * d1 +
                   a1 * (-m * b1 * b1 - 2.0 * a2 * k * l * b1 + 2.0 * b2 * d1 * k * m) * d1 +
                   a1 * a1 * k * (2.0 * a2 * b1 * l - b2 * d1 * m);
  const double Q = b2 * k * a1 * a1 + (b1 * b1 - 2.0 * b2 * d1 * k) * a1 + b2 * d1 * d1 * k;
  const T rho = (2.0 * a1 * (a1 - d1) * k * l * e2 + b1 * d1 * (a1 + d1)) / ((a1 - d1) * d1 * k);
  const T d2 = (a1 * a2 * b1 * b1 * d1 + E * e2 + 2.0 * a1 * b1 * (d1 - a1) * k * l * m * e2 * e2) /
               (d1 * Q + 2.0 * a1 * b1 * (a1 - d1) * k * l * e2);
  return BasicParams<T>{T(a1), T(a2), T(b1), T(b2), T(d1), d2, T(k), rho};
}

/// p3 for generic parameters (no guard).
template <class T>
std::array<T, 3> p3_generic(const BasicParams<T>& p) {
  const T den = p.a1 - p.d1;
  return {p.b1 * p.d1 / den, -p.b1 * (p.b1 * p.d1 + (p.d1 - p.a1) * p.k * p.rho) / (den * den * p.k),
          T(0.0)};
}

}  // namespace tritrophic
