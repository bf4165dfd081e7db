#include "tritrophic/food_chain_averaging.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>

#include "tritrophic/errors.hpp"
#include "tritrophic/transform.hpp"

namespace tritrophic {

namespace {

// Coefficients of
//   F201 = C1 r (A w^2 - B (4 a1 l b1^2 + d1 (d1 - a1) r^2))
//   F202 = C2 w (D0 - D1 r^2 - D2 w^2)
struct F20Coefficients {
  double C1, A, B, l_term, r2_term;
  double C2, D0, D1, D2;
};

F20Coefficients f20_coefficients(const HopfSetup& s) {
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1, l = s.l, m = s.m;
  const double N = closed_form_N(s);
  const double ad = a1 - d1, L3 = a1 * b1 - 2.0 * b2 * d1;
  F20Coefficients c{};
  c.C1 = N / (2.0 * std::numbers::sqrt2 * std::pow(a1 * b1, 4) * d1);
  c.A = 2.0 * ad * ad * L3 * (b1 * a1 * a1 * a1 - b1 * d1 * a1 * a1 - 4.0 * a2 * b2 * d1 * d1);
  c.B = a1 * a1 * a1 * b1 * b1 * d1;
  c.l_term = 4.0 * a1 * l * b1 * b1;
  c.r2_term = d1 * (d1 - a1);
  c.C2 = -std::numbers::sqrt2 / std::pow(a1 * b1, 5) * ad * ad * L3 * N * N * N;
  c.D0 = std::pow(a1 * b1, 4) * m;
  c.D1 = 6.0 * a1 * a2 * b2 * d1 * d1 * d1 * b1;
  c.D2 = 2.0 * a2 * b2 * ad * ad * d1 * L3;
  return c;
}

}  // namespace

PeriodicSystem food_chain_system(const HopfSetup& s) {
  validate(s);
  PeriodicSystem sys;
  sys.dimension = 2;
  sys.period = 2.0 * std::numbers::pi;
  sys.terms = [s](double theta, const VecX& z) {
    const SeriesCoefficients c = extract_series(s, theta, z[0], z[1]);
    StandardForm f;
    f.f1 = Eigen::Vector2d(c.F11, c.F12);
    f.f2 = Eigen::Vector2d(c.F21, c.F22);
    return f;
  };
  // F1 is a homogeneous quadratic in (r, w) at fixed theta, so central
  // differences are exact for any step; a large one keeps rounding out.
  // r - h stays positive.
  sys.dz_f1 = [s](double theta, const VecX& z) -> MatX {
    const double hr = 0.25 * z[0], hw = 0.25 * std::max(1.0, std::abs(z[1]));
    const auto f1 = [&](double r, double w) {
      const SeriesCoefficients c = extract_series(s, theta, r, w);
      return Eigen::Vector2d(c.F11, c.F12);
    };
    MatX J(2, 2);
    J.col(0) = (f1(z[0] + hr, z[1]) - f1(z[0] - hr, z[1])) / (2.0 * hr);
    J.col(1) = (f1(z[0], z[1] + hw) - f1(z[0], z[1] - hw)) / (2.0 * hw);
    return J;
  };
  return sys;
}

double closed_form_N(const HopfSetup& s) {
  validate(s);
  const double ad = s.a1 - s.d1;
  return std::sqrt(s.a1 * s.b1 / (ad * ad * (s.a1 * s.b1 - 2.0 * s.b2 * s.d1)));
}

Eigen::Vector2d closed_F10(const HopfSetup& s, double r, double w) {
  validate(s);
  const double a1 = s.a1, b1 = s.b1, b2 = s.b2, d1 = s.d1;
  const double k = s.k_override ? *s.k_override : degenerate_k(s);
  const double num = b1 * k * a1 * a1 * a1 - 2.0 * b1 * d1 * k * a1 * a1 - 2.0 * b2 * d1 * k * a1 * a1 -
                     2.0 * b1 * b1 * d1 * a1 + b1 * d1 * d1 * k * a1 + 4.0 * b2 * d1 * d1 * k * a1 -
                     2.0 * b2 * d1 * d1 * d1 * k;
  // 2 a1 k P' times the eps^0 angular rate -T0 = sqrt(b1 d1 k)/k.
  const double P = 2.0 * a1 * std::sqrt(b1 * d1 * k) *
                   (b2 * k * a1 * a1 + b1 * b1 * a1 - 2.0 * b2 * d1 * k * a1 + b2 * d1 * d1 * k);
  return {-num * r * w / P, 0.0};
}

Eigen::Vector2d closed_F20(const HopfSetup& s, double r, double w) {
  const F20Coefficients c = f20_coefficients(s);
  return {c.C1 * r * (c.A * w * w - c.B * (c.l_term + c.r2_term * r * r)),
          c.C2 * w * (c.D0 - c.D1 * r * r - c.D2 * w * w)};
}

Eigen::Matrix2d closed_F20_jacobian(const HopfSetup& s, double r, double w) {
  const F20Coefficients c = f20_coefficients(s);
  Eigen::Matrix2d J;
  J(0, 0) = c.C1 * (c.A * w * w - c.B * (c.l_term + 3.0 * c.r2_term * r * r));
  J(0, 1) = c.C1 * r * 2.0 * c.A * w;
  J(1, 0) = -2.0 * c.C2 * c.D1 * r * w;
  J(1, 1) = c.C2 * (c.D0 - c.D1 * r * r - 3.0 * c.D2 * w * w);
  return J;
}

AveragedField closed_averaged_field(const HopfSetup& s) {
  f20_coefficients(s);  // validates eagerly
  AveragedField f;
  f.dimension = 2;
  f.f20 = [s](const VecX& z) -> VecX { return closed_F20(s, z[0], z[1]); };
  f.jacobian = [s](const VecX& z) -> MatX { return closed_F20_jacobian(s, z[0], z[1]); };
  return f;
}

AveragedField numerical_averaged_field(const HopfSetup& s, const QuadratureOptions& opt) {
  const PeriodicSystem sys = food_chain_system(s);
  AveragedField f;
  f.dimension = 2;
  f.f10 = [sys, opt](const VecX& z) { return average_first(sys, z, opt); };
  f.f20 = [sys, opt](const VecX& z) { return average_second(sys, z, opt); };
  return f;
}

void dump_closed_field_csv(const HopfSetup& s, const Grid2& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << "r,w,F201,F202\n" << std::setprecision(17);
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const Eigen::Vector2d v = closed_F20(s, g.x(i), g.y(j));
      out << g.x(i) << ',' << g.y(j) << ',' << v[0] << ',' << v[1] << '\n';
    }
}

}  // namespace tritrophic
