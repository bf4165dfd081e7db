#include "tritrophic/hopf.hpp"

#include <cmath>
#include <string>

#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

SpectrumAtP3 spectrum_p3(const ModelParams& p) {
  const double a1 = p.a1, a2 = p.a2, b1 = p.b1, b2 = p.b2, d1 = p.d1, d2 = p.d2, k = p.k;
  const double kr = k * p.rho;
  if (std::abs(a1 - d1) <= 1e-10 * a1) throw DomainError("spectrum at p3 requires a1 != d1");
  const double mu_den = b1 * b1 * d1 - b2 * (a1 - d1) * (a1 - d1) * k + b1 * (d1 - a1) * kr;
  if (std::abs(mu_den) <= 1e-14 * (b1 * b1 * d1 + b2 * (a1 - d1) * (a1 - d1) * k + std::abs(b1 * (d1 - a1) * kr)))
    throw DomainError("spectrum at p3: mu denominator vanishes");

  SpectrumAtP3 sp{};
  sp.Delta = d1 * (-4.0 * a1 * (a1 - d1) * (a1 - d1) * k * (-b1 * d1 + (a1 - d1) * kr) +
                   d1 * std::pow(a1 * (b1 - kr) + d1 * (b1 + kr), 2));
  const double lead = -a1 * b1 * d1 - b1 * d1 * d1 + a1 * d1 * kr - d1 * d1 * kr;
  const double scale = 2.0 * a1 * (a1 - d1) * k;
  const std::complex<double> root = std::sqrt(std::complex<double>(sp.Delta, 0.0));
  sp.lambda_plus = (lead + root) / scale;
  sp.lambda_minus = (lead - root) / scale;
  if (sp.Delta < 0.0) sp.lambda_minus = std::conj(sp.lambda_plus);
  sp.mu = -d2 + a2 * b1 * (b1 * d1 + (d1 - a1) * kr) / mu_den;
  return sp;
}

double degenerate_k(const HopfSetup& s) {
  const double a1d1 = s.a1 - s.d1;
  return 2.0 * s.a1 * s.b1 * s.b1 * s.d1 / (a1d1 * a1d1 * (s.a1 * s.b1 - 2.0 * s.b2 * s.d1));
}

void validate(const HopfSetup& s) {
  auto positive = [](double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0))
      throw ConstraintViolation(std::string(name) + " must be finite and > 0");
  };
  positive(s.a1, "a1");
  positive(s.a2, "a2");
  positive(s.b1, "b1");
  positive(s.b2, "b2");
  positive(s.d1, "d1");
  if (!std::isfinite(s.l) || !std::isfinite(s.m)) throw ConstraintViolation("l and m must be finite");
  if (!std::isfinite(s.epsilon) || s.epsilon < 0.0) throw ConstraintViolation("epsilon must be >= 0");
  if (!(s.a1 > s.d1)) throw ConstraintViolation("a1 > d1 required");
  if (!(s.a1 * s.b1 - 2.0 * s.b2 * s.d1 > 0.0))
    throw ConstraintViolation("a1 b1 - 2 b2 d1 > 0 required");
  if (s.k_override && !(*s.k_override > 0.0)) throw ConstraintViolation("k override must be > 0");
}

ConstrainedValues constrained_values(const HopfSetup& s) {
  validate(s);
  const auto p = constrained_params(s, s.epsilon);
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1, k = p.k;
  ConstrainedValues v{};
  v.k = k;
  v.rho = p.rho;
  v.d2 = p.d2;
  v.E = -b2 * k * s.m * d1 * d1 * d1 + a1 * (-s.m * b1 * b1 - 2.0 * a2 * k * s.l * b1 + 2.0 * b2 * d1 * k * s.m) * d1 +
        a1 * a1 * k * (2.0 * a2 * b1 * s.l - b2 * d1 * s.m);
  v.l3_margin = a1 * b1 - 2.0 * b2 * d1;
  return v;
}

ModelParams solve_constraints(const HopfSetup& s) {
  const ConstrainedValues v = constrained_values(s);
  if (!std::isfinite(v.rho) || !(v.rho > 0.0))
    throw ConstraintViolation("derived rho = " + std::to_string(v.rho) + " is not positive");
  if (!std::isfinite(v.d2) || !(v.d2 > 0.0))
    throw ConstraintViolation("derived d2 = " + std::to_string(v.d2) + " is not positive");
  return ModelParams{s.a1, s.a2, s.b1, s.b2, s.d1, v.d2, v.k, v.rho};
}

ExpectedSpectrum expected_spectrum(const HopfSetup& s) {
  const double k = s.k_override ? *s.k_override : degenerate_k(s);
  const double e2 = s.epsilon * s.epsilon;
  const std::complex<double> rad(k * (e2 * k * s.l * (s.l * e2 - 2.0 * s.a1 + 2.0 * s.d1) - s.b1 * s.d1), 0.0);
  const std::complex<double> im = std::sqrt(rad) / k;
  return {e2 * s.l + im, e2 * s.l - im, e2 * s.m};
}

double d2_reduced_form(double a1, double a2, double b1, double b2, double d1, double k) {
  return a1 * a2 * b1 * b1 / (a1 * a1 * b2 * k + b2 * d1 * d1 * k + a1 * (b1 * b1 - 2.0 * b2 * d1 * k));
}

DegeneracyCheck check_degeneracy(const ModelParams& p) {
  const double a1 = p.a1, a2 = p.a2, b1 = p.b1, b2 = p.b2, d1 = p.d1, k = p.k;
  const double d2 = a1 * a2 * b1 * b1 * d1 /
                    (a1 * a1 * b2 * d1 * k + b2 * d1 * d1 * d1 * k + a1 * d1 * (b1 * b1 - 2.0 * b2 * d1 * k));
  const double rho = b1 * (a1 + d1) / ((a1 - d1) * k);
  const double kk = 2.0 * a1 * b1 * b1 * d1 / ((a1 - d1) * (a1 - d1) * (a1 * b1 - 2.0 * b2 * d1));
  return {rel_diff(p.d2, d2), rel_diff(p.rho, rho), rel_diff(p.k, kk), a1 * b1 - 2.0 * b2 * d1};
}

}  // namespace tritrophic
