#include "tritrophic/model.hpp"

#include <cmath>
#include <string>

#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

void check_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw DomainError(std::string("parameter ") + name + " must be finite and > 0, got " +
                      std::to_string(v));
}

void check_holling(const ModelParams& p, const StateVec& s) {
  if (!s.allFinite()) throw DomainError("state has non-finite components");
  if (std::abs(p.b1 + s.x()) < kHollingGuard)
    throw DomainError("Holling denominator b1 + x vanishes");
  if (std::abs(p.b2 + s.y()) < kHollingGuard)
    throw DomainError("Holling denominator b2 + y vanishes");
}

}  // namespace

void validate(const ModelParams& p) {
  check_positive(p.a1, "a1");
  check_positive(p.a2, "a2");
  check_positive(p.b1, "b1");
  check_positive(p.b2, "b2");
  check_positive(p.d1, "d1");
  check_positive(p.d2, "d2");
  check_positive(p.k, "k");
  check_positive(p.rho, "rho");
}

StateVec vector_field(const ModelParams& p, const StateVec& s) {
  check_holling(p, s);
  const auto f = food_chain_rhs(p, s.x(), s.y(), s.z());
  return {f[0], f[1], f[2]};
}

Matrix3 jacobian(const ModelParams& p, const StateVec& s) {
  check_holling(p, s);
  const double x = s.x(), y = s.y(), z = s.z();
  const double bx = p.b1 + x, by = p.b2 + y;
  Matrix3 J;
  J(0, 0) = p.rho - 2.0 * x / p.k - p.a1 * y * p.b1 / (bx * bx);
  J(0, 1) = -p.a1 * x / bx;
  J(0, 2) = 0.0;
  J(1, 0) = p.a1 * p.b1 * y / (bx * bx);
  J(1, 1) = p.a1 * x / bx - p.d1 - p.a2 * p.b2 * z / (by * by);
  J(1, 2) = -p.a2 * y / by;
  J(2, 0) = 0.0;
  J(2, 1) = p.a2 * p.b2 * z / (by * by);
  J(2, 2) = p.a2 * y / by - p.d2;
  return J;
}

}  // namespace tritrophic
