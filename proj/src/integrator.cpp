#include "tritrophic/integrator.hpp"

namespace tritrophic {

void IntegratorConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(rtol) || !in_unit(atol)) throw ConfigError("integrator tolerances must lie in (0, 1)");
  if (!(max_step > 0.0)) throw ConfigError("integrator max_step must be > 0");
  if (max_steps <= 0) throw ConfigError("integrator max_steps must be > 0");
}

Trajectory<3> integrate(const ModelParams& p, const StateVec& s0, double t0, double t1,
                        const IntegratorConfig& cfg) {
  validate(p);
  auto rhs = [&p](double, const VecN<3>& s) {
    const auto f = food_chain_rhs(p, s[0], s[1], s[2]);
    return VecN<3>(f[0], f[1], f[2]);
  };
  return dopri5<3>(rhs, t0, s0, t1, cfg);
}

}  // namespace tritrophic
