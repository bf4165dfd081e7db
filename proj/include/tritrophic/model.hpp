#pragma once

// Tritrophic food chain: logistic prey x, Holling type II predator y and
// Holling type II top predator z.
//
//   x' = x (rho - x/k - a1 y/(b1 + x))
//   y' = y (a1 x/(b1 + x) - a2 z/(b2 + y) - d1)
//   z' = z (a2 y/(b2 + y) - d2)

#include <array>

#include <Eigen/Core>

namespace tritrophic {

using StateVec = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

/// The eight rates/capacities of the model. Generic in the scalar so the
/// same formulas can be evaluated on truncated series in epsilon.
template <class T>
struct BasicParams {
  T a1, a2, b1, b2, d1, d2, k, rho;
};

using ModelParams = BasicParams<double>;

/// Throws DomainError unless every field is finite and strictly positive.
void validate(const ModelParams& p);

/// |b1 + x| and |b2 + y| below this are rejected.
inline constexpr double kHollingGuard = 1e-12;

template <class T, class S>
std::array<S, 3> food_chain_rhs(const BasicParams<T>& p, const S& x, const S& y, const S& z) {
  // z' is kept in factored form so that z == 0 stays exactly zero.
  const S holling1 = x / (p.b1 + x);
  const S holling2 = y / (p.b2 + y);
  return {x * (p.rho - x / p.k - p.a1 * y / (p.b1 + x)),
          y * (p.a1 * holling1 - p.a2 * z / (p.b2 + y) - p.d1),
          z * (p.a2 * holling2 - p.d2)};
}

/// Vector field with Holling-denominator guard (DomainError).
StateVec vector_field(const ModelParams& p, const StateVec& s);

/// Analytic Jacobian of vector_field.
Matrix3 jacobian(const ModelParams& p, const StateVec& s);

}  // namespace tritrophic
