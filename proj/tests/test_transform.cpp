#include <doctest.h>

#include <limits>
#include <numbers>

#include "common.hpp"
#include "tritrophic/equilibria.hpp"
#include "tritrophic/errors.hpp"

using namespace tritrophic;
using testing::rel;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double printed_R1(const HopfSetup& s, double k, double th, double r, double w) {
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1;
  const double q = std::sqrt(b1 * d1 * k);
  const double P = b2 * k * a1 * a1 + b1 * b1 * a1 - 2.0 * b2 * d1 * k * a1 + b2 * d1 * d1 * k;
  const double c = std::cos(th), sn = std::sin(th);
  const double k2 = k * k, b22 = b2 * b2;
  const double poly = b22 * k2 * std::pow(a1, 5) + a2 * b1 * b2 * k2 * std::pow(a1, 4) -
                      3 * b22 * d1 * k2 * std::pow(a1, 4) + 2 * b1 * b1 * b2 * k * std::pow(a1, 4) +
                      std::pow(b1, 4) * std::pow(a1, 3) + 2 * b22 * d1 * d1 * k2 * std::pow(a1, 3) -
                      3 * a2 * b1 * b2 * d1 * k2 * std::pow(a1, 3) - 2 * b1 * b1 * b2 * d1 * k * std::pow(a1, 3) +
                      2 * b22 * std::pow(d1, 3) * k2 * a1 * a1 + 3 * a2 * b1 * b2 * d1 * d1 * k2 * a1 * a1 +
                      std::pow(b1, 4) * d1 * a1 * a1 - 2 * b1 * b1 * b2 * d1 * d1 * k * a1 * a1 -
                      3 * b22 * std::pow(d1, 4) * k2 * a1 - a2 * b1 * b2 * std::pow(d1, 3) * k2 * a1 +
                      2 * b1 * b1 * b2 * std::pow(d1, 3) * k * a1 + b22 * std::pow(d1, 5) * k2;
  return d1 * d1 * r * r / (a1 * q) * c * c * c - (a1 - d1) * r * r / b1 * c * c * sn -
         2 * d1 * w * r / (a1 * k) * c * c + q * w * w / (a1 * k2) * c +
         (a1 - d1) / (a1 * q * P * P) * poly * r * w * c * sn +
         (a1 - d1) * d1 * (d1 - a1) * k * r * r / (a1 * b1 * q) * c * sn * sn +
         b1 * (a1 - d1) * (a1 - d1) * r * w / P * sn * sn - (a1 - d1) * w * w / (a1 * k) * sn;
}

// F12 in closed form; the printed W1 is off by a factor rho / r.
double corrected_F12(const HopfSetup& s, double k, double th, double r, double w) {
  const double ad = s.a1 - s.d1;
  const double P = s.b2 * k * ad * ad + s.a1 * s.b1 * s.b1;
  return s.a2 * s.b2 * std::pow(ad, 4) * k * k * r * w * std::sin(th) / (P * P * theta_rate_T0(s));
}

}  // namespace

TEST_CASE("forward and inverse are mutually inverse") {
  testing::SetupSampler sampler(21);
  for (int trial = 0; trial < 60; ++trial) {
    const HopfSetup s = sampler.next();
    for (double e : {0.01, 0.05}) {
      const NormalFormTransform nf(s, e);
      for (int i = 0; i < 20; ++i) {
        const CylState c{sampler.u(0.1, 5.0), sampler.u(0.0, kTwoPi), sampler.u(-5.0, 5.0)};
        const StateVec x = nf.inverse(c);
        const CylState back = nf.forward(x);
        CHECK(std::abs(back.r - c.r) <= 1e-12 * std::max(1.0, c.r) * 1e2);
        CHECK(std::abs(std::remainder(back.theta - c.theta, kTwoPi)) <= 1e-10);
        CHECK(std::abs(back.w - c.w) <= 1e-12 * std::max(1.0, std::abs(c.w)) * 1e2);
        const StateVec again = nf.inverse(back);
        CHECK((again - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
      }
    }
  }
}

TEST_CASE("p3 maps to the origin and w = 0 is the plane z = 0") {
  const HopfSetup s = testing::example_setup(0.02);
  const NormalFormTransform nf(s, 0.02);
  CHECK(nf.forward(nf.p3()).r == doctest::Approx(0.0).epsilon(1e-14));
  for (double th : {0.0, 1.0, 2.5, 4.0}) {
    CHECK(nf.inverse(CylState{3.0, th, 0.0})[2] == 0.0);
    CHECK(nf.theta_dynamics(CylState{3.0, th, 0.0}).dw_dtheta == 0.0);
  }
}

TEST_CASE("linear part becomes the real Jordan block") {
  testing::SetupSampler sampler(4);
  for (int trial = 0; trial < 40; ++trial) {
    const HopfSetup s = sampler.next();
    for (double e : {0.0, 0.01, 0.05}) {
      // At eps = 0 the transform itself needs e > 0, so use the matrix at a tiny e.
      const double eps = std::max(e, 1e-8);
      const NormalFormTransform nf(s, eps);
      const Matrix3 J = jacobian(nf.params(), nf.p3());
      const Matrix3 B = nf.inverse_matrix() * J * nf.matrix();
      const double scale = J.cwiseAbs().maxCoeff();
      HopfSetup at = s;
      at.epsilon = eps;
      const double omega = std::abs(expected_spectrum(at).lambda_plus.imag());
      const double e2 = eps * eps;
      CHECK(std::abs(B(0, 0) - e2 * s.l) <= 1e-9 * scale);
      CHECK(std::abs(B(1, 1) - e2 * s.l) <= 1e-9 * scale);
      CHECK(std::abs(B(2, 2) - e2 * s.m) <= 1e-9 * scale);
      CHECK(std::abs(std::abs(B(0, 1)) - std::abs(B(1, 0))) <= 1e-9 * scale);
      CHECK(std::abs(B(1, 0)) == doctest::Approx(omega).epsilon(1e-9));
      CHECK(std::abs(B(2, 0)) + std::abs(B(2, 1)) <= 1e-9 * scale);
      // The W column is an eigenvector only to leading order.
      CHECK(std::abs(B(0, 2)) + std::abs(B(1, 2)) <= 10.0 * e2 * scale + 1e-9 * scale);
    }
  }
}

TEST_CASE("truncation error of the series is third order") {
  // theta_dynamics minus the two-term series should be eps^3 F3 up to O(eps^4).
  const HopfSetup s = testing::example_setup();
  for (const auto& c : {CylState{2.0, 0.3, 1.0}, CylState{1.0, 2.0, -0.5}, CylState{3.0, 5.0, 0.7}}) {
    const SeriesCoefficients sc = extract_series(s, c.theta, c.r, c.w);
    double previous = 0.0;
    for (double e : {1e-3, 5e-4}) {
      const ThetaRates exact = NormalFormTransform(s, e).theta_dynamics(c);
      const double e3 = e * e * e;
      const double dr = exact.dr_dtheta - (e * sc.F11 + e * e * sc.F21) - e3 * sc.F31;
      const double dw = exact.dw_dtheta - (e * sc.F12 + e * e * sc.F22) - e3 * sc.F32;
      const double leftover = std::hypot(dr, dw);
      CHECK(leftover <= 0.5 * e3 * std::hypot(sc.F31, sc.F32));
      // What is left is fourth order.
      if (previous > 0.0) CHECK(previous / leftover > 12.0);
      previous = leftover;
    }
  }
}

TEST_CASE("printed R1 over T0 matches the extracted F11") {
  testing::SetupSampler sampler(31);
  for (int trial = 0; trial < 40; ++trial) {
    const HopfSetup s = trial == 0 ? testing::example_setup() : sampler.next();
    const double k = degenerate_k(s);
    for (int i = 0; i < 10; ++i) {
      const double th = sampler.u(0.0, kTwoPi), r = sampler.u(0.1, 5.0), w = sampler.u(-3.0, 3.0);
      const SeriesCoefficients sc = extract_series(s, th, r, w);
      const double want = printed_R1(s, k, th, r, w) / sc.T0;
      const double scale = std::abs(printed_R1(s, k, th, r, 0.0)) + std::abs(want) + 1.0;
      CHECK(std::abs(sc.F11 - want) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("F12 / (r w sin theta) is constant and matches the corrected W1") {
  const HopfSetup s = testing::example_setup();
  const double k = degenerate_k(s);
  double first = NAN;
  for (double th : {0.4, 1.3, 2.2, 4.0, 5.5})
    for (double r : {0.5, 2.0})
      for (double w : {-1.5, 0.8}) {
        const SeriesCoefficients sc = extract_series(s, th, r, w);
        const double ratio = sc.F12 / (r * w * std::sin(th));
        if (std::isnan(first)) first = ratio;
        CHECK(rel(ratio, first) <= 1e-10);
        CHECK(rel(sc.F12, corrected_F12(s, k, th, r, w)) <= 1e-10);
      }
}

TEST_CASE("Richardson extrapolation agrees with the series extraction") {
  const HopfSetup s = testing::example_setup();
  for (const auto& c : {CylState{2.0, 0.3, 1.0}, CylState{1.0, 2.0, -0.5}}) {
    const SeriesCoefficients sc = extract_series(s, c.theta, c.r, c.w);
    const RichardsonSeries rs = extract_series_richardson(s, c.theta, c.r, c.w, 1e-3, 1e-3);
    const double f1 = std::abs(sc.F11) + std::abs(sc.F12);
    const double f2 = std::abs(sc.F21) + std::abs(sc.F22);
    CHECK(std::abs(rs.F11 - sc.F11) <= 1e-5 * f1);
    CHECK(std::abs(rs.F12 - sc.F12) <= 1e-5 * f1);
    CHECK(std::abs(rs.F21 - sc.F21) <= 1e-3 * f2);
    CHECK(std::abs(rs.F22 - sc.F22) <= 1e-3 * f2);
  }
}

TEST_CASE("coefficients are 2 pi periodic and F1 is quadratic") {
  testing::SetupSampler sampler(12);
  for (int trial = 0; trial < 20; ++trial) {
    const HopfSetup s = sampler.next();
    const double th = sampler.u(0.0, kTwoPi), r = sampler.u(0.1, 5.0), w = sampler.u(-3.0, 3.0);
    const SeriesCoefficients a = extract_series(s, th, r, w);
    const SeriesCoefficients b = extract_series(s, th + kTwoPi, r, w);
    CHECK(std::abs(a.F11 - b.F11) <= 1e-11 * (1.0 + std::abs(a.F11)));
    CHECK(std::abs(a.F22 - b.F22) <= 1e-11 * (1.0 + std::abs(a.F22)));
    const SeriesCoefficients c = extract_series(s, th, 3.0 * r, 3.0 * w);
    CHECK(std::abs(c.F11 - 9.0 * a.F11) <= 1e-11 * (1.0 + std::abs(c.F11)));
    CHECK(std::abs(c.F12 - 9.0 * a.F12) <= 1e-11 * (1.0 + std::abs(c.F12)));
    CHECK(rel(a.T0, theta_rate_T0(s)) <= 1e-13);
  }
}

TEST_CASE("theta reparametrization guard") {
  // Far from p3 the rotation stalls somewhere; bisect onto the stall along a ray.
  const HopfSetup s = testing::example_setup();
  const NormalFormTransform nf(s, 0.05);
  auto rate = [&](double r, double th) {
    try {
      return nf.polar_rates(CylState{r, th, 0.0}).theta_dot;
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  bool found = false;
  for (double th = 0.0; th < kTwoPi && !found; th += 0.1) {
    double lo = 0.1, hi = 0.2;
    for (; hi < 1e6; lo = hi, hi *= 1.2) {
      const double a = rate(lo, th), b = rate(hi, th);
      if (std::isnan(a) || std::isnan(b)) break;
      // Skip sign changes through a pole.
      if (a * b < 0.0 && std::abs(a) < 20.0 && std::abs(b) < 20.0) break;
    }
    if (!(hi < 1e6) || std::isnan(rate(hi, th)) || rate(lo, th) * rate(hi, th) >= 0.0 || std::abs(rate(hi, th)) >= 20.0)
      continue;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (rate(lo, th) * rate(mid, th) <= 0.0 ? hi : lo) = mid;
    }
    found = true;
    const double r = std::abs(rate(lo, th)) < std::abs(rate(hi, th)) ? lo : hi;
    CHECK(std::abs(rate(r, th)) < 1e-10);
    CHECK_THROWS_AS(nf.theta_dynamics(CylState{r, th, 0.0}), ReparametrizationError);
  }
  CHECK(found);
}

TEST_CASE("transform requires a positive epsilon") {
  CHECK_THROWS_AS(NormalFormTransform(testing::example_setup(), -0.1), ConstraintViolation);
}
