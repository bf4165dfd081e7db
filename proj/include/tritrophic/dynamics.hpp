#pragma once

// Direct check of the predicted cycles on the full system: section
// crossings, a periodic orbit near each prediction, and Floquet multipliers.

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "tritrophic/cycles.hpp"
#include "tritrophic/exec.hpp"
#include "tritrophic/integrator.hpp"

namespace tritrophic {

struct Monodromy {
  Matrix3 matrix;
  std::array<std::complex<double>, 3> multipliers;  // trivial one first
  double trivial_defect;                            // |multiplier - 1| of the trivial one
  StateVec end_state;
  double trace_integral;       // int_0^T trace(jacobian) dt
  double z_growth_integral;    // int_0^T (a2 y/(b2 + y) - d2) dt
};

/// Integrates the variational equations over one period. Throws
/// ConvergenceError when no multiplier is within `trivial_tol` of 1.
Monodromy monodromy(const ModelParams& p, const StateVec& cycle_point, double period,
                    const IntegratorConfig& cfg = {}, double trivial_tol = 1e-4);

/// Hyperplane n . (x - point) = 0, crossed in the direction of n.
struct Section {
  StateVec point;
  StateVec normal;  // unit
  double signed_distance(const StateVec& x) const { return normal.dot(x - point); }
};

struct VerifyOptions {
  int max_iterations = 50;
  double tol = 1e-10;       // on |phi(T, x) - x| relative to the p3 scale
  double box_factor = 10.0; // bounding box: this times the p3 scale
  int crossings = 3;        // returns recorded from the predicted point
};

struct PoincareRecord {
  CycleBranch branch = CycleBranch::in_plane;
  double epsilon = 0.0;
  Section section{};
  StateVec predicted{};      // initial condition from the prediction
  std::vector<StateVec> return_points;
  std::vector<double> return_times;
  StateVec cycle_point{};
  double period = 0.0;
  double linear_period = 0.0;     // 2 pi / omega
  int iterations = 0;
  double closure = 0.0;            // |phi(T, x*) - x*|
  double distance = 0.0;           // |x* - predicted|
  Eigen::Matrix2d return_map_jacobian = Eigen::Matrix2d::Zero();
  Monodromy floquet{};
  std::array<std::complex<double>, 2> nontrivial{};  // the two other multipliers
  double z_min = 0.0, z_max = 0.0;  // over one period
  bool stable() const { return std::abs(nontrivial[0]) < 1.0 && std::abs(nontrivial[1]) < 1.0; }
};

/// Locates the periodic orbit near the prediction at the given eps.
/// Throws DomainError if the prediction does not exist or eps <= 0,
/// IntegrationError when the trajectory leaves the bounding box or does
/// not return to the section, ConvergenceError when the shooting Newton
/// iteration needs more than max_iterations.
PoincareRecord poincare_verify(const HopfSetup& setup, const CyclePrediction& pred, double epsilon,
                               const IntegratorConfig& cfg = {}, const VerifyOptions& opt = {});

struct ScanEntry {
  double epsilon;
  std::optional<PoincareRecord> record;
  std::string error;  // when !record
};

struct ScanResult {
  CycleBranch branch;
  std::vector<ScanEntry> entries;
  /// Order p of distance ~ eps^p between consecutive successful entries,
  /// and the matching ratio 2^p for a halving of eps.
  std::vector<double> orders;
  std::vector<double> halving_ratios;
};

/// poincare_verify for each eps; runs are independent, so Exec::parallel
/// distributes them.
ScanResult verify_scan(const HopfSetup& setup, const CyclePrediction& pred, const std::vector<double>& eps,
                       const IntegratorConfig& cfg = {}, const VerifyOptions& opt = {}, Exec exec = Exec::serial);

}  // namespace tritrophic
