#pragma once

#include <optional>
#include <random>

#include "tritrophic/hopf.hpp"
#include "tritrophic/model.hpp"
#include "tritrophic/transform.hpp"

namespace testing {

using namespace tritrophic;

/// The worked example: a1=5, a2=0.1, b1=3, b2=2, d1=0.4, l=400, m=1.
inline HopfSetup example_setup(double eps = 0.0) { return HopfSetup{5.0, 0.1, 3.0, 2.0, 0.4, 400.0, 1.0, eps, {}}; }

inline double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

/// Random setups for which the constraints can be solved at every eps in
/// {0, 0.01, 0.05} and the change of variables is regular.
class SetupSampler {
 public:
  explicit SetupSampler(unsigned seed) : rng_(seed) {}

  HopfSetup next() {
    for (;;) {
      HopfSetup s{u(2.0, 6.0), u(0.05, 1.0), u(1.0, 4.0), u(0.5, 3.0), u(0.1, 1.0), u(-20.0, 20.0), u(-5.0, 5.0),
                  0.0, {}};
      if (acceptable(s)) return s;
    }
  }

  double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  static bool acceptable(const HopfSetup& s) {
    try {
      for (double e : {0.0, 0.01, 0.05}) {
        HopfSetup t = s;
        t.epsilon = e;
        solve_constraints(t);
        if (e > 0.0) NormalFormTransform(t, e);
      }
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  std::mt19937_64 rng_;
};

/// Random positive parameter sets (not constrained).
inline ModelParams random_params(std::mt19937_64& rng) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  return ModelParams{u(0.5, 6.0), u(0.05, 2.0), u(0.5, 4.0), u(0.5, 3.0), u(0.05, 1.0), u(0.01, 1.0), u(0.05, 2.0),
                     u(0.5, 30.0)};
}

}  // namespace testing
