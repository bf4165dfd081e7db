#pragma once

// Quadrature on a uniform periodic grid t_j = j T / n, j = 0..n-1 (n even).
// Sample matrices hold one node per row and one component per column.

#include <Eigen/Core>

#include "tritrophic/exec.hpp"

namespace tritrophic {

/// Rule for the running integral int_0^{t_j} f on the grid.
enum class InnerRule {
  spectral,  // trigonometric interpolation of the samples (default)
  simpson,   // cumulative Simpson, with a 3-point rule on odd nodes
};

/// (1/T) int_0^T f by composite Simpson on the periodic grid.
Eigen::RowVectorXd periodic_simpson_mean(const Eigen::MatrixXd& samples);

/// Running integrals G(t_j) = int_0^{t_j} f(t) dt for every node.
Eigen::MatrixXd cumulative_integral(const Eigen::MatrixXd& samples, double period, InnerRule rule,
                                    Exec exec = Exec::serial);

}  // namespace tritrophic
