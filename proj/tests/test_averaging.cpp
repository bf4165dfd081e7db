#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numbers>

#include "common.hpp"
#include "tritrophic/errors.hpp"
#include "tritrophic/food_chain_averaging.hpp"

using namespace tritrophic;
using testing::rel;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// z = (r, w): F1 = (w cos t, r sin t), F2 = (r, 0). Then F10 = 0 and
// F20 = <D F1 . int F1> + <F2> = (-r/2 + r, w/2).
PeriodicSystem toy_system() {
  PeriodicSystem sys;
  sys.dimension = 2;
  sys.period = kTwoPi;
  sys.terms = [](double t, const VecX& z) {
    StandardForm f;
    f.f1 = Eigen::Vector2d(z[1] * std::cos(t), z[0] * std::sin(t));
    f.f2 = Eigen::Vector2d(z[0], 0.0);
    return f;
  };
  return sys;
}

}  // namespace

TEST_CASE("hand-computed averages of a toy system") {
  const PeriodicSystem sys = toy_system();
  const VecX z = Eigen::Vector2d(1.5, -0.7);
  const AveragedPair a = average_both(sys, z);
  CHECK(a.f10.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(a.f20[0] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(a.f20[1] == doctest::Approx(-0.35).epsilon(1e-9));
  CHECK(periodicity_defect(sys, z) < 1e-14);

  QuadratureOptions simpson;
  simpson.inner = InnerRule::simpson;
  simpson.rel_tol = 1e-7;
  const VecX b = average_second(sys, z, simpson);
  CHECK((b - a.f20).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("quadrature that cannot converge throws") {
  PeriodicSystem sys;
  sys.dimension = 1;
  sys.period = kTwoPi;
  // Kink at t = pi / 3 off the grid: the composite rule stalls at low order.
  sys.terms = [](double t, const VecX& z) {
    StandardForm f;
    f.f1 = VecX::Constant(1, std::abs(t - kTwoPi / 6.0) * z[0]);
    f.f2 = VecX::Zero(1);
    return f;
  };
  QuadratureOptions opt;
  opt.min_panels = 16;
  opt.max_doublings = 2;
  opt.rel_tol = 1e-12;
  CHECK_THROWS_AS(average_first(sys, VecX::Constant(1, 1.0), opt), ConvergenceError);
  opt.min_panels = 15;
  CHECK_THROWS_AS(average_first(sys, VecX::Constant(1, 1.0), opt), DomainError);
}

TEST_CASE("serial and OpenMP sampling and averaging agree bitwise") {
  const HopfSetup s = testing::example_setup();
  const PeriodicSystem sys = food_chain_system(s);
  const VecX z = Eigen::Vector2d(150.0, 12.0);
  const IntegrandSamples a = sample_integrands(sys, z, 128, true, Exec::serial);
  const IntegrandSamples b = sample_integrands(sys, z, 128, true, Exec::parallel);
  CHECK((a.f1.array() == b.f1.array()).all());
  CHECK((a.f2.array() == b.f2.array()).all());
  for (std::size_t j = 0; j < a.dz_f1.size(); ++j) CHECK((a.dz_f1[j].array() == b.dz_f1[j].array()).all());
  QuadratureOptions par;
  par.exec = Exec::parallel;
  const AveragedPair x = average_both(sys, z);
  const AveragedPair y = average_both(sys, z, par);
  CHECK((x.f20.array() == y.f20.array()).all());
  CHECK((x.f10.array() == y.f10.array()).all());
}

TEST_CASE("numerical F20 matches the closed forms") {
  testing::SetupSampler sampler(41);
  for (int trial = 0; trial < 12; ++trial) {
    const HopfSetup s = trial == 0 ? testing::example_setup() : sampler.next();
    const AveragedField numeric = numerical_averaged_field(s);
    for (int i = 0; i < 4; ++i) {
      const double r = sampler.u(0.5, 50.0), w = sampler.u(-20.0, 20.0);
      const VecX z = Eigen::Vector2d(r, w);
      const Eigen::Vector2d closed = closed_F20(s, r, w);
      const VecX num = numeric.f20(z);
      const double scale = closed.cwiseAbs().maxCoeff() + 1e-300;
      CHECK((num - closed).cwiseAbs().maxCoeff() <= 1e-8 * scale);
      // At the degenerate k the first-order average vanishes.
      CHECK(numeric.f10(z).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("closed F10 matches quadrature away from the degenerate k") {
  testing::SetupSampler sampler(42);
  for (int trial = 0; trial < 6; ++trial) {
    HopfSetup s = sampler.next();
    s.k_override = degenerate_k(s) * sampler.u(0.5, 2.0);
    const PeriodicSystem sys = food_chain_system(s);
    const double r = sampler.u(0.5, 10.0), w = sampler.u(-5.0, 5.0);
    const VecX f10 = average_first(sys, Eigen::Vector2d(r, w));
    const Eigen::Vector2d closed = closed_F10(s, r, w);
    CHECK(rel(f10[0], closed[0]) <= 1e-9);
    CHECK(std::abs(f10[1]) <= 1e-10 * std::abs(f10[0]));
    CHECK(closed[1] == 0.0);
  }
}

TEST_CASE("closed F20 parity in w and analytic Jacobian") {
  testing::SetupSampler sampler(43);
  for (int trial = 0; trial < 50; ++trial) {
    const HopfSetup s = sampler.next();
    const double r = sampler.u(0.1, 100.0), w = sampler.u(-50.0, 50.0);
    const Eigen::Vector2d p = closed_F20(s, r, w), q = closed_F20(s, r, -w);
    CHECK(p[0] == q[0]);
    CHECK(p[1] == -q[1]);
    CHECK(closed_F20(s, r, 0.0)[1] == 0.0);
    const AveragedField f = closed_averaged_field(s);
    const VecX z = Eigen::Vector2d(r, w);
    const MatX J = f.jacobian_at(z), Jfd = f.fd_jacobian(z);
    CHECK((J - Jfd).cwiseAbs().maxCoeff() <= 1e-6 * (1.0 + J.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("2x2 eigenvalues match Eigen") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::Matrix2d m;
    m << u(rng), u(rng), u(rng), u(rng);
    const auto ours = eigenvalues_2x2(m);
    const Eigen::EigenSolver<Eigen::Matrix2d> es(m, false);
    for (const auto& e : ours) {
      const double d = std::min(std::abs(e - es.eigenvalues()[0]), std::abs(e - es.eigenvalues()[1]));
      CHECK(d <= 1e-12 * (1.0 + m.norm()));
    }
    if (ours[0].imag() == 0.0) CHECK(ours[0].real() >= ours[1].real());
  }
  // Nearly equal large roots keep their small difference.
  Eigen::Matrix2d m;
  m << 1e8, 1.0, 0.0, 1e8 + 1e-3;
  const auto e = eigenvalues_2x2(m);
  CHECK(e[0].real() - e[1].real() == doctest::Approx(1e-3).epsilon(1e-3));
}

TEST_CASE("Newton search finds, deduplicates and reports failures") {
  AveragedField f;
  f.dimension = 2;
  // Zeros at (+-2, 1); singular Jacobian on x = 0.
  f.f20 = [](const VecX& z) { return VecX(Eigen::Vector2d(z[0] * z[0] - 4.0, z[1] - 1.0)); };
  const std::vector<VecX> seeds{Eigen::Vector2d(3.0, 0.0), Eigen::Vector2d(1.5, 5.0), Eigen::Vector2d(-1.0, 1.0),
                                Eigen::Vector2d(0.0, 0.0)};
  for (Exec exec : {Exec::serial, Exec::parallel}) {
    const ZeroSearch zs = find_zeros(f, seeds, {}, exec);
    REQUIRE(zs.zeros.size() == 2);
    CHECK(zs.zeros[0].z0[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(zs.zeros[0].seed_index == 0);
    CHECK(zs.zeros[1].z0[0] == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(zs.zeros[0].degree_nonzero);
    REQUIRE(zs.failures.size() == 1);
    CHECK(zs.failures[0].seed_index == 3);
  }
}

TEST_CASE("sign-change scan brackets the zeros") {
  Grid2 g;
  g.x_min = 0.0;
  g.x_max = 10.0;
  g.nx = 101;
  g.y_min = -5.0;
  g.y_max = 5.0;
  g.ny = 51;
  auto field = [](double x, double y) { return Eigen::Vector2d((x - 3.33) * (x - 7.77), y - 1.23); };
  const auto a = sign_change_scan(field, g, Exec::serial);
  const auto b = sign_change_scan(field, g, Exec::parallel);
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(a[c].i == b[c].i);
    CHECK(a[c].j == b[c].j);
  }
  CHECK(std::abs(a[0].center[0] - 3.33) <= 0.05);
  CHECK(std::abs(a[1].center[0] - 7.77) <= 0.05);
  CHECK(std::abs(a[0].center[1] - 1.23) <= 0.1);
}
