#include "tritrophic/averaging.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <variant>

#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

double sup(const VecX& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

MatX central_jacobian(const std::function<VecX(const VecX&)>& f, const VecX& z, double step) {
  const Eigen::Index n = z.size();
  MatX J(0, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = step * std::max(1.0, std::abs(z[i]));
    VecX zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    const VecX col = (f(zp) - f(zm)) / (2.0 * h);
    if (i == 0) J.resize(col.size(), n);
    J.col(i) = col;
  }
  return J;
}

void check_system(const PeriodicSystem& sys) {
  if (sys.dimension <= 0 || !(sys.period > 0.0) || !sys.terms)
    throw DomainError("periodic system needs a dimension, a positive period and its terms");
}

// Accept when the change is below rel_tol of the result or of the mean
// integrand magnitude; the latter matters for averages that cancel to 0.
bool converged(const VecX& prev, const VecX& next, double magnitude, double rel_tol) {
  return sup(next - prev) <= rel_tol * std::max(sup(next), magnitude);
}

struct Pass {
  VecX f10, f20;
  double m1 = 0.0, m2 = 0.0;  // mean sup-norms of the two integrands
};

Pass one_pass(const PeriodicSystem& sys, const VecX& z, int n, bool second, const QuadratureOptions& opt) {
  const IntegrandSamples s = sample_integrands(sys, z, n, second, opt.exec);
  Pass p;
  p.f10 = periodic_simpson_mean(s.f1).transpose();
  p.m1 = s.f1.cwiseAbs().rowwise().maxCoeff().mean();
  if (!second) return p;
  const MatX G = cumulative_integral(s.f1, sys.period, opt.inner, opt.exec);
  MatX integrand(n, sys.dimension);
  for (int j = 0; j < n; ++j) integrand.row(j) = (s.dz_f1[j] * G.row(j).transpose()).transpose() + s.f2.row(j);
  p.f20 = periodic_simpson_mean(integrand).transpose();
  p.m2 = integrand.cwiseAbs().rowwise().maxCoeff().mean();
  return p;
}

AveragedPair run(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt, bool second) {
  check_system(sys);
  if (opt.min_panels < 2 || opt.min_panels % 2) throw DomainError("min_panels must be even and >= 2");
  int n = opt.min_panels;
  Pass prev = one_pass(sys, z, n, second, opt);
  for (int d = 0; d < opt.max_doublings; ++d) {
    n *= 2;
    Pass next = one_pass(sys, z, n, second, opt);
    const bool ok1 = converged(prev.f10, next.f10, next.m1, opt.rel_tol);
    const bool ok2 = !second || converged(prev.f20, next.f20, next.m2, opt.rel_tol);
    if (ok1 && ok2) return {next.f10, second ? next.f20 : VecX(), n};
    prev = std::move(next);
  }
  throw ConvergenceError("averaging quadrature did not converge after " + std::to_string(opt.max_doublings) +
                         " doublings");
}

}  // namespace

MatX PeriodicSystem::dz_f1_at(double t, const VecX& z) const {
  if (dz_f1) return dz_f1(t, z);
  return central_jacobian([&](const VecX& x) { return terms(t, x).f1; }, z, fd_step);
}

IntegrandSamples sample_integrands(const PeriodicSystem& sys, const VecX& z, int n, bool with_jacobian, Exec exec) {
  check_system(sys);
  IntegrandSamples s;
  s.f1.resize(n, sys.dimension);
  s.f2.resize(n, sys.dimension);
  if (with_jacobian) s.dz_f1.resize(static_cast<std::size_t>(n));
  // Exceptions cannot leave an OpenMP region; carry the first one out.
  std::optional<std::string> failure;
#pragma omp parallel for schedule(dynamic, 8) if (exec == Exec::parallel)
  for (int j = 0; j < n; ++j) {
    try {
      const double t = sys.period * double(j) / double(n);
      const StandardForm f = sys.terms(t, z);
      s.f1.row(j) = f.f1.transpose();
      s.f2.row(j) = f.f2.transpose();
      if (with_jacobian) s.dz_f1[static_cast<std::size_t>(j)] = sys.dz_f1_at(t, z);
    } catch (const std::exception& e) {
#pragma omp critical(tritrophic_sample_failure)
      if (!failure) failure = e.what();
    }
  }
  if (failure) throw DomainError("integrand evaluation failed: " + *failure);
  return s;
}

VecX average_first(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt) {
  return run(sys, z, opt, false).f10;
}

VecX average_second(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt) {
  return run(sys, z, opt, true).f20;
}

AveragedPair average_both(const PeriodicSystem& sys, const VecX& z, const QuadratureOptions& opt) {
  return run(sys, z, opt, true);
}

double periodicity_defect(const PeriodicSystem& sys, const VecX& z, int samples) {
  check_system(sys);
  double worst = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double t = sys.period * double(j) / double(samples);
    const StandardForm a = sys.terms(t, z), b = sys.terms(t + sys.period, z);
    worst = std::max({worst, sup(a.f1 - b.f1), sup(a.f2 - b.f2)});
  }
  return worst;
}

VecX AveragedField::value(const VecX& z) const {
  VecX v = epsilon * f20(z);
  if (f10) v += f10(z);
  return v;
}

MatX AveragedField::fd_jacobian(const VecX& z) const {
  return central_jacobian([this](const VecX& x) { return value(x); }, z, fd_step);
}

MatX AveragedField::jacobian_at(const VecX& z) const { return jacobian ? jacobian(z) : fd_jacobian(z); }

double field_scale(const MatX& jac, const VecX& z) {
  const double jn = jac.size() ? jac.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  return 1.0 + jn * sup(z);
}

std::array<std::complex<double>, 2> eigenvalues_2x2(const Eigen::Matrix2d& m) {
  const double half_tr = 0.5 * (m(0, 0) + m(1, 1));
  const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
  // Discriminant as ((a-d)/2)^2 + bc avoids cancellation in tr^2/4 - det.
  const double disc = half_diff * half_diff + m(0, 1) * m(1, 0);
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double big = half_tr + (half_tr >= 0.0 ? s : -s);
    const double det = m.determinant();
    const double small = big != 0.0 ? det / big : half_tr - (half_tr >= 0.0 ? s : -s);
    return {std::complex<double>(std::max(big, small), 0.0), std::complex<double>(std::min(big, small), 0.0)};
  }
  const double s = std::sqrt(-disc);
  return {std::complex<double>(half_tr, s), std::complex<double>(half_tr, -s)};
}

std::vector<std::complex<double>> eigenvalues_of(const MatX& m) {
  if (m.rows() == 2 && m.cols() == 2) {
    const auto e = eigenvalues_2x2(m);
    return {e[0], e[1]};
  }
  Eigen::EigenSolver<MatX> es(m, false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

namespace {

std::variant<AveragedZero, std::string> newton_from(const AveragedField& field, const VecX& seed,
                                                    const NewtonOptions& opt) {
  VecX z = seed;
  VecX F = field.value(z);
  for (int it = 0; it <= opt.max_iterations; ++it) {
    if (!F.allFinite()) return std::string("field is not finite at an iterate");
    const MatX J = field.jacobian_at(z);
    const double res = sup(F);
    if (res <= opt.residual_tol * field_scale(J, z)) {
      AveragedZero out;
      out.z0 = z;
      out.residual = res;
      out.iterations = it;
      out.eigenvalues = eigenvalues_of(J);
      out.determinant = J.determinant();
      double colprod = 1.0;
      for (Eigen::Index c = 0; c < J.cols(); ++c) colprod *= J.col(c).norm();
      out.degree_nonzero = std::abs(out.determinant) > opt.degree_tol * colprod;
      return out;
    }
    if (it == opt.max_iterations) break;
    Eigen::FullPivLU<MatX> lu(J);
    if (!lu.isInvertible()) return std::string("singular Jacobian during Newton iteration");
    const VecX step = lu.solve(-F);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      const VecX trial = z + lambda * step;
      const VecX Ft = field.value(trial);
      if (Ft.allFinite() && sup(Ft) < res) {
        z = trial;
        F = Ft;
        accepted = true;
        break;
      }
    }
    if (!accepted) return std::string("damping could not decrease the residual");
  }
  return std::string("no convergence within the iteration budget");
}

}  // namespace

ZeroSearch find_zeros(const AveragedField& field, const std::vector<VecX>& seeds, const NewtonOptions& opt,
                      Exec exec) {
  const auto count = static_cast<std::ptrdiff_t>(seeds.size());
  std::vector<std::variant<AveragedZero, std::string>> results(seeds.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = newton_from(field, seeds[static_cast<std::size_t>(i)], opt);
    } catch (const std::exception& e) {
      results[static_cast<std::size_t>(i)] = std::string(e.what());
    }
  }
  // Dedupe in seed order so the output does not depend on scheduling.
  ZeroSearch out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (auto* msg = std::get_if<std::string>(&results[i])) {
      out.failures.push_back({i, *msg});
      continue;
    }
    AveragedZero z = std::get<AveragedZero>(results[i]);
    z.seed_index = i;
    const bool dup = std::any_of(out.zeros.begin(), out.zeros.end(), [&](const AveragedZero& o) {
      return (o.z0 - z.z0).norm() < opt.dedupe_distance;
    });
    if (!dup) out.zeros.push_back(std::move(z));
  }
  return out;
}

std::vector<SignChangeCell> sign_change_scan(const std::function<Eigen::Vector2d(double, double)>& field,
                                             const Grid2& g, Exec exec) {
  if (g.nx < 2 || g.ny < 2) throw DomainError("sign-change scan needs at least 2x2 nodes");
  std::vector<Eigen::Vector2d> values(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) values[static_cast<std::size_t>(i * g.ny + j)] = field(g.x(i), g.y(j));

  std::vector<SignChangeCell> cells;
  for (int i = 0; i + 1 < g.nx; ++i) {
    for (int j = 0; j + 1 < g.ny; ++j) {
      bool all = true;
      for (int c = 0; c < 2 && all; ++c) {
        double lo = INFINITY, hi = -INFINITY;
        for (int di = 0; di < 2; ++di)
          for (int dj = 0; dj < 2; ++dj) {
            const double v = values[static_cast<std::size_t>((i + di) * g.ny + j + dj)][c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        all = lo <= 0.0 && hi >= 0.0;
      }
      if (all) cells.push_back({i, j, {0.5 * (g.x(i) + g.x(i + 1)), 0.5 * (g.y(j) + g.y(j + 1))}});
    }
  }
  return cells;
}

}  // namespace tritrophic
