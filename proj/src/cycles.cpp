#include "tritrophic/cycles.hpp"

#include <Eigen/LU>
#include <cmath>
#include <numbers>

#include "tritrophic/errors.hpp"
#include "tritrophic/food_chain_averaging.hpp"
#include "tritrophic/transform.hpp"

namespace tritrophic {

Radicands radicands(const HopfSetup& s) {
  validate(s);
  const double a1 = s.a1, a2 = s.a2, b1 = s.b1, b2 = s.b2, d1 = s.d1, l = s.l, m = s.m;
  const double ad = a1 - d1;
  const double five = 5.0 * b1 * a1 * a1 * a1 - 5.0 * b1 * d1 * a1 * a1 - 24.0 * a2 * b2 * d1 * d1;
  Radicands R{};
  R.R1 = a1 * l / (ad * d1);
  R.R2 = a1 * b1 * (a1 * a1 * b1 * ad * m - 4.0 * a2 * b2 * d1 * d1 * (l + m)) / (a2 * b2 * d1 * five);
  R.W2 = (24.0 * a2 * b2 * d1 * d1 * l - a1 * a1 * b1 * ad * m) /
         (a2 * b2 * ad * ad * d1 * (2.0 * b2 * d1 - a1 * b1) * (-five));
  return R;
}

const char* to_string(CycleBranch b) {
  switch (b) {
    case CycleBranch::in_plane: return "r1,0";
    case CycleBranch::upper: return "r2,+w2";
    case CycleBranch::lower: return "r2,-w2";
  }
  return "?";
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::repeller: return "Repeller";
    case Stability::attractor: return "Attractor";
    case Stability::saddle_like: return "Saddle-like";
    case Stability::indeterminate: return "Indeterminate";
  }
  return "?";
}

const char* to_string(HalfSpace h) {
  switch (h) {
    case HalfSpace::z_positive: return "z>0";
    case HalfSpace::z_zero: return "z=0";
    case HalfSpace::z_negative: return "z<0";
  }
  return "?";
}

Stability classify(const std::array<std::complex<double>, 2>& eig, double margin) {
  const double a = eig[0].real(), b = eig[1].real();
  if (std::abs(a) <= margin || std::abs(b) <= margin) return Stability::indeterminate;
  if (a > 0.0 && b > 0.0) return Stability::repeller;
  if (a < 0.0 && b < 0.0) return Stability::attractor;
  return Stability::saddle_like;
}

namespace {

void fill_stability(const HopfSetup& s, CyclePrediction& p) {
  const double r = p.zero[0], w = p.zero[1];
  p.jac = closed_F20_jacobian(s, r, w);
  AveragedField f = closed_averaged_field(s);
  VecX z(2);
  z << r, w;
  const MatX fd = f.fd_jacobian(z);
  p.jac_fd_mismatch = (fd - p.jac).cwiseAbs().maxCoeff() / p.jac.cwiseAbs().maxCoeff();
  p.eigenvalues = eigenvalues_2x2(p.jac);
  const double orientation = theta_rate_T0(s) < 0.0 ? -1.0 : 1.0;
  p.time_eigenvalues = {orientation * p.eigenvalues[0], orientation * p.eigenvalues[1]};
  if (p.time_eigenvalues[0].real() < p.time_eigenvalues[1].real()) std::swap(p.time_eigenvalues[0], p.time_eigenvalues[1]);
  p.theta_stability = classify(p.eigenvalues);
  p.stability = classify(p.time_eigenvalues);
}

}  // namespace

std::vector<CyclePrediction> predict_cycles(const HopfSetup& s) {
  const Radicands R = radicands(s);
  const double a1 = s.a1, b1 = s.b1, d1 = s.d1;
  const AveragedField field = closed_averaged_field(s);

  std::vector<CyclePrediction> out;
  for (CycleBranch b : {CycleBranch::in_plane, CycleBranch::upper, CycleBranch::lower}) {
    CyclePrediction p;
    p.branch = b;
    p.radicand = R;
    if (b == CycleBranch::in_plane) {
      p.exists = R.R1 > 0.0;
      if (!p.exists) p.failing_radicand = "R1";
      else p.closed_form = {2.0 * b1 * std::sqrt(R.R1), 0.0};
    } else {
      p.exists = R.R2 > 0.0 && R.W2 > 0.0;
      if (!p.exists) p.failing_radicand = R.R2 > 0.0 ? "W2" : "R2";
      else {
        const double w2 = a1 * a1 * b1 * b1 / std::numbers::sqrt2 * std::sqrt(R.W2);
        p.closed_form = {a1 * b1 / d1 * std::sqrt(R.R2), b == CycleBranch::upper ? w2 : -w2};
      }
    }
    if (!p.exists) {
      out.push_back(std::move(p));
      continue;
    }

    VecX seed(2);
    seed << p.closed_form[0], p.closed_form[1];
    const ZeroSearch zs = find_zeros(field, {seed});
    if (!zs.zeros.empty()) {
      p.refined = true;
      p.zero = zs.zeros.front().z0;
      p.refinement_shift = (p.zero - p.closed_form).norm() / p.closed_form.norm();
    } else {
      p.zero = p.closed_form;
    }
    fill_stability(s, p);
    p.half_space = half_space_of(s, p);
    if (s.epsilon > 0.0) {
      const NormalFormTransform t(s, s.epsilon);
      p.initial_condition_xyz = t.inverse({p.zero[0], 0.0, p.zero[1]});
    }
    out.push_back(std::move(p));
  }
  return out;
}

Stability stability_of(const HopfSetup& s, const CyclePrediction& pred) {
  if (!pred.exists) throw DomainError("prediction does not exist (" + pred.failing_radicand + " <= 0)");
  const Eigen::Matrix2d J = closed_F20_jacobian(s, pred.zero[0], pred.zero[1]);
  const double scale = J.col(0).norm() * J.col(1).norm();
  if (!(std::abs(J.determinant()) >= 1e-10 * scale))
    throw SingularMatrixError("degenerate Jacobian at the zero; the averaging theorem does not apply");
  CyclePrediction copy = pred;
  fill_stability(s, copy);
  return copy.stability;
}

HalfSpace half_space_of(const HopfSetup& s, const CyclePrediction& pred) {
  if (pred.zero[1] == 0.0) return HalfSpace::z_zero;
  // z = G W, and G can have either sign.
  const NormalFormTransform t(s, s.epsilon);
  const double z = (t.matrix() * Eigen::Vector3d(pred.zero[0], 0.0, pred.zero[1]))[2];
  if (z > 0.0) return HalfSpace::z_positive;
  if (z < 0.0) return HalfSpace::z_negative;
  return HalfSpace::z_zero;
}

}  // namespace tritrophic
