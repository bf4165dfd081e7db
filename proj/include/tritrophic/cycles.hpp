#pragma once

// Closed-form predictions of the small-amplitude limit cycles: the zeros
// (r1, 0) and (r2, +-w2) of the second-order averaged field, their
// stability and the half-space of the cycle they produce.

#include <Eigen/Core>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "tritrophic/averaging.hpp"
#include "tritrophic/hopf.hpp"
#include "tritrophic/model.hpp"

namespace tritrophic {

/// Radicands of the closed-form zeros (not the series numerators).
struct Radicands {
  double R1, R2, W2;
};
Radicands radicands(const HopfSetup& s);

enum class CycleBranch { in_plane, upper, lower };  // (r1, 0), (r2, +w2), (r2, -w2)
enum class Stability { repeller, attractor, saddle_like, indeterminate };
enum class HalfSpace { z_positive, z_zero, z_negative };

const char* to_string(CycleBranch b);
const char* to_string(Stability s);
const char* to_string(HalfSpace h);

/// Class from the real parts; within `margin` of zero gives indeterminate.
Stability classify(const std::array<std::complex<double>, 2>& eig, double margin = 1e-8);

struct CyclePrediction {
  CycleBranch branch = CycleBranch::in_plane;
  bool exists = false;
  std::string failing_radicand;  // set when !exists
  Radicands radicand{};
  Eigen::Vector2d closed_form{NAN, NAN};  // (r0, w0) from the closed expressions
  Eigen::Vector2d zero{NAN, NAN};         // Newton-refined zero of the closed F20
  bool refined = false;
  double refinement_shift = NAN;  // |zero - closed_form| / |closed_form|
  Eigen::Matrix2d jac = Eigen::Matrix2d::Constant(NAN);
  double jac_fd_mismatch = NAN;  // relative, analytic vs central differences
  /// Eigenvalues of jac. jac is a derivative in theta.
  std::array<std::complex<double>, 2> eigenvalues{};
  /// Eigenvalues re-expressed along physical time. theta decreases as t
  /// grows (theta-dot = T0 < 0 at eps = 0), which flips every sign.
  std::array<std::complex<double>, 2> time_eigenvalues{};
  Stability stability = Stability::indeterminate;        // from time_eigenvalues
  Stability theta_stability = Stability::indeterminate;  // from eigenvalues
  HalfSpace half_space = HalfSpace::z_zero;
  std::optional<StateVec> initial_condition_xyz;  // when setup.epsilon > 0
};

/// Relative tolerance on the Newton shift from the closed form.
inline constexpr double kRefinementTol = 1e-8;

/// All three branches; non-existing ones name the failing radicand.
/// Never throws for missing cycles; throws ConstraintViolation for an
/// invalid setup.
std::vector<CyclePrediction> predict_cycles(const HopfSetup& s);

/// Physical-time class at the refined zero. Throws DomainError if the
/// prediction does not exist and SingularMatrixError if |det J| is below
/// 1e-10 of the column-norm product.
Stability stability_of(const HopfSetup& s, const CyclePrediction& pred);

HalfSpace half_space_of(const HopfSetup& s, const CyclePrediction& pred);

}  // namespace tritrophic
