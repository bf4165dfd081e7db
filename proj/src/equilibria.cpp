#include "tritrophic/equilibria.hpp"

#include <cmath>
#include <optional>

#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

// "Denominator nonzero" relative to the numerator it divides.
bool nonzero_denominator(double den, double numerator_scale) {
  return std::abs(den) > 1e-10 * std::max(1.0, std::abs(numerator_scale));
}

Equilibrium make_missing(EquilibriumLabel label, std::string reason) {
  Equilibrium e;
  e.label = label;
  e.exists = false;
  e.reason = std::move(reason);
  return e;
}

Equilibrium make_existing(const ModelParams& p, EquilibriumLabel label, const StateVec& s) {
  Equilibrium e;
  e.label = label;
  e.state = s;
  if (!s.allFinite()) return make_missing(label, "non-finite coordinates");
  try {
    e.residual = vector_field(p, s).cwiseAbs().maxCoeff();
  } catch (const DomainError& err) {
    return make_missing(label, err.what());
  }
  e.exists = true;
  return e;
}

}  // namespace

std::string_view to_string(EquilibriumLabel label) {
  switch (label) {
    case EquilibriumLabel::P1: return "p1";
    case EquilibriumLabel::P2: return "p2";
    case EquilibriumLabel::P3: return "p3";
    case EquilibriumLabel::P4: return "p4";
    case EquilibriumLabel::P5: return "p5";
    case EquilibriumLabel::P6: return "p6";
  }
  return "?";
}

EquilibriumAux equilibrium_aux(const ModelParams& p) {
  const double kr = p.k * p.rho;
  EquilibriumAux aux{};
  aux.A = -p.a2 * p.b1 + p.b1 * p.d2 + p.a2 * kr - p.d2 * kr;
  // Discriminant of the x-quadratic scaled by (a2-d2)^2; no leading factor 4.
  aux.B = (p.a2 - p.d2) * (p.a2 * (p.b1 + kr) * (p.b1 + kr) -
                           p.d2 * (p.b1 * p.b1 + 4.0 * p.a1 * p.b2 * p.k + 2.0 * p.b1 * kr + kr * kr));
  aux.C = p.a1 * p.b1 + p.b1 * p.d1 - p.a1 * kr + p.d1 * kr;
  aux.D = p.a2 * p.b1 - p.b1 * p.d2 + p.a2 * kr - p.d2 * kr;
  return aux;
}

StateVec p3_state(const ModelParams& p) {
  const double den = p.a1 - p.d1;
  if (!nonzero_denominator(den, p.a1)) throw DomainError("p3 requires a1 != d1");
  const double x3 = p.b1 * p.d1 / den;
  const double y3 = -p.b1 * (p.b1 * p.d1 + (p.d1 - p.a1) * p.k * p.rho) / (den * den * p.k);
  return {x3, y3, 0.0};
}

std::vector<Equilibrium> all_equilibria(const ModelParams& p) {
  validate(p);
  std::vector<Equilibrium> out;
  out.reserve(6);

  out.push_back(make_existing(p, EquilibriumLabel::P1, StateVec::Zero()));
  out.push_back(make_existing(p, EquilibriumLabel::P2, {p.k * p.rho, 0.0, 0.0}));

  if (nonzero_denominator(p.a1 - p.d1, p.a1))
    out.push_back(make_existing(p, EquilibriumLabel::P3, p3_state(p)));
  else
    out.push_back(make_missing(EquilibriumLabel::P3, "a1 == d1"));

  const double a2d2 = p.a2 - p.d2;
  const bool have_a2d2 = nonzero_denominator(a2d2, p.b2 * std::max(p.d1, p.d2));
  if (have_a2d2)
    out.push_back(make_existing(p, EquilibriumLabel::P4,
                                {0.0, p.b2 * p.d2 / a2d2, -p.b2 * p.d1 / a2d2}));
  else
    out.push_back(make_missing(EquilibriumLabel::P4, "a2 == d2"));

  const EquilibriumAux aux = equilibrium_aux(p);
  auto coexistence = [&](EquilibriumLabel label, double sign) -> Equilibrium {
    if (!have_a2d2) return make_missing(label, "a2 == d2");
    if (aux.B < 0.0) return make_missing(label, "B < 0");
    const double sb = std::sqrt(aux.B);
    const double x = (aux.A + sign * sb) / (2.0 * a2d2);
    const double y = p.b2 * p.d2 / a2d2;
    const double num = p.b2 * (p.a1 - p.d1) * sb - sign * p.b2 * aux.C * a2d2;
    const double den = a2d2 * (sb + sign * aux.D);
    if (!nonzero_denominator(den, num))
      return make_missing(label, sign > 0 ? "sqrt(B) + D == 0" : "sqrt(B) - D == 0");
    return make_existing(p, label, {x, y, num / den});
  };
  out.push_back(coexistence(EquilibriumLabel::P5, +1.0));
  out.push_back(coexistence(EquilibriumLabel::P6, -1.0));
  return out;
}

}  // namespace tritrophic
