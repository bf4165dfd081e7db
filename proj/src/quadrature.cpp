#include "tritrophic/quadrature.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

void require_even_grid(Eigen::Index n) {
  if (n < 2 || n % 2 != 0) throw DomainError("periodic Simpson needs an even number of panels");
}

// One column of the spectral running integral. Coefficients and node
// values are each computed in a fixed summation order, so the OpenMP path
// matches the serial path bit for bit.
void spectral_column(const Eigen::MatrixXd& f, Eigen::Index col, double period,
                     const std::vector<std::complex<double>>& twiddle, Eigen::MatrixXd& out, Exec exec) {
  const Eigen::Index n = f.rows();
  const Eigen::Index half = n / 2;
  std::vector<std::complex<double>> c(static_cast<std::size_t>(half));

#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Eigen::Index k = 0; k < half; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index j = 0; j < n; ++j) acc += f(j, col) * std::conj(twiddle[static_cast<std::size_t>((k * j) % n)]);
    c[static_cast<std::size_t>(k)] = acc / double(n);
  }

  const double omega = 2.0 * std::numbers::pi / period;
  const double mean = c[0].real();
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = period * double(j) / double(n);
    double g = mean * t;
    // The Nyquist mode integrates to sin(pi j) = 0 on the nodes.
    for (Eigen::Index k = 1; k < half; ++k) {
      const std::complex<double> e = twiddle[static_cast<std::size_t>((k * j) % n)] - 1.0;
      g += 2.0 * (c[static_cast<std::size_t>(k)] * e / std::complex<double>(0.0, omega * double(k))).real();
    }
    out(j, col) = g;
  }
}

}  // namespace

Eigen::RowVectorXd periodic_simpson_mean(const Eigen::MatrixXd& samples) {
  const Eigen::Index n = samples.rows();
  require_even_grid(n);
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(samples.cols());
  // Weights 2, 4, 2, 4, ... (the endpoint weights 1 + 1 merge at t_0).
  for (Eigen::Index j = 0; j < n; ++j) acc += (j % 2 == 0 ? 2.0 : 4.0) * samples.row(j);
  return acc / (3.0 * double(n));
}

Eigen::MatrixXd cumulative_integral(const Eigen::MatrixXd& f, double period, InnerRule rule, Exec exec) {
  const Eigen::Index n = f.rows();
  require_even_grid(n);
  Eigen::MatrixXd out(n, f.cols());
  if (rule == InnerRule::spectral) {
    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n));
    for (Eigen::Index m = 0; m < n; ++m)
      twiddle[static_cast<std::size_t>(m)] = std::polar(1.0, 2.0 * std::numbers::pi * double(m) / double(n));
    for (Eigen::Index col = 0; col < f.cols(); ++col) spectral_column(f, col, period, twiddle, out, exec);
    return out;
  }

  const double h = period / double(n);
  for (Eigen::Index col = 0; col < f.cols(); ++col) {
    auto at = [&](Eigen::Index j) { return f(j % n, col); };
    out(0, col) = 0.0;
    for (Eigen::Index j = 1; j < n; ++j) {
      if (j % 2 == 0)
        out(j, col) = out(j - 2, col) + h / 3.0 * (at(j - 2) + 4.0 * at(j - 1) + at(j));
      else
        out(j, col) = out(j - 1, col) + h / 12.0 * (5.0 * at(j - 1) + 8.0 * at(j) - at(j + 1));
    }
  }
  return out;
}

}  // namespace tritrophic
