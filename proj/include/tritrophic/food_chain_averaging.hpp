#pragma once

// The food chain near p3 as a 2*pi-periodic system in theta for z = (r, w),
// and the closed forms of its averaged functions.

#include <Eigen/Core>
#include <filesystem>

#include "tritrophic/averaging.hpp"
#include "tritrophic/hopf.hpp"

namespace tritrophic {

/// F1 = (F11, F12), F2 = (F21, F22) from the exact pipeline.
/// D_z F1 by central differences with a step of a quarter of (r, max(1, |w|)).
PeriodicSystem food_chain_system(const HopfSetup& s);

/// The N intermediate of the second-order closed forms. Throws
/// ConstraintViolation unless a1 > d1 and a1 b1 - 2 b2 d1 > 0.
double closed_form_N(const HopfSetup& s);

/// First component of the first-order average for an arbitrary k (uses
/// s.k_override when set); zero at the degenerate k.
Eigen::Vector2d closed_F10(const HopfSetup& s, double r, double w);

/// (F201, F202) at the degenerate k.
Eigen::Vector2d closed_F20(const HopfSetup& s, double r, double w);
Eigen::Matrix2d closed_F20_jacobian(const HopfSetup& s, double r, double w);

/// F20 from the closed forms with its analytic Jacobian.
AveragedField closed_averaged_field(const HopfSetup& s);

/// F10 and F20 by quadrature of food_chain_system.
AveragedField numerical_averaged_field(const HopfSetup& s, const QuadratureOptions& opt = {});

/// Writes r, w, F201, F202 on the grid as CSV.
void dump_closed_field_csv(const HopfSetup& s, const Grid2& grid, const std::filesystem::path& path);

}  // namespace tritrophic
