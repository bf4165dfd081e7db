#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tritrophic/model.hpp"

namespace tritrophic {

enum class EquilibriumLabel { P1, P2, P3, P4, P5, P6 };

std::string_view to_string(EquilibriumLabel label);

/// Intermediates of the coexistence points p5/p6.
struct EquilibriumAux {
  double A, B, C, D;
};

struct Equilibrium {
  EquilibriumLabel label;
  StateVec state = StateVec::Zero();
  bool exists = false;
  std::string reason;  // why it does not exist; empty otherwise
  double residual = 0.0;  // inf-norm of the vector field at state
};

EquilibriumAux equilibrium_aux(const ModelParams& p);

/// All six singular points in label order. Non-existing points carry
/// exists == false and a reason; existing ones carry their residual.
std::vector<Equilibrium> all_equilibria(const ModelParams& p);

/// The Hopf point p3 = (b1 d1/(a1-d1), y3, 0). Throws DomainError if a1 == d1.
StateVec p3_state(const ModelParams& p);

}  // namespace tritrophic
