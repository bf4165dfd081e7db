#include "tritrophic/serialize.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "tritrophic/errors.hpp"

namespace tritrophic {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json cplx(std::complex<double> c) { return Json{{"re", num(c.real())}, {"im", num(c.imag())}}; }

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
  return a;
}

Json mat(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

double read_num(const Json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string(where) + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double read_num_or(const Json& j, const char* key, const char* where, double fallback) {
  return j.contains(key) ? read_num(j, key, where) : fallback;
}

double read_or_nan(const Json& j, const char* key) {
  return j.contains(key) && j.at(key).is_number() ? j.at(key).get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ModelParams params_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("model: expected an object");
  const char* w = "model";
  ModelParams p{read_num(j, "a1", w), read_num(j, "a2", w), read_num(j, "b1", w), read_num(j, "b2", w),
                read_num(j, "d1", w), read_num(j, "d2", w), read_num(j, "k", w),  read_num(j, "rho", w)};
  return p;
}

HopfSetup setup_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("hopf: expected an object");
  const char* w = "hopf";
  HopfSetup s{read_num(j, "a1", w), read_num(j, "a2", w), read_num(j, "b1", w), read_num(j, "b2", w),
              read_num(j, "d1", w), read_num(j, "l", w),  read_num(j, "m", w),  read_num_or(j, "epsilon", w, 0.0),
              std::nullopt};
  if (j.contains("k_override") && !j.at("k_override").is_null()) s.k_override = read_num(j, "k_override", w);
  return s;
}

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  const bool has_model = j.contains("model"), has_hopf = j.contains("hopf");
  if (has_model == has_hopf) throw ConfigError("config: supply exactly one of 'model' or 'hopf'");
  RunConfig c;
  if (has_model) c.model = params_from_json(j.at("model"));
  else c.hopf = setup_from_json(j.at("hopf"));
  if (j.contains("epsilon")) {
    const Json& e = j.at("epsilon");
    if (!e.is_array() || e.empty()) throw ConfigError("config: 'epsilon' must be a non-empty array");
    c.epsilons.clear();
    for (const Json& v : e) {
      if (!v.is_number()) throw ConfigError("config: 'epsilon' entries must be numbers");
      c.epsilons.push_back(v.get<double>());
    }
  }
  if (j.contains("integrator")) {
    const Json& g = j.at("integrator");
    const char* w = "integrator";
    c.integrator.rtol = read_num_or(g, "rtol", w, c.integrator.rtol);
    c.integrator.atol = read_num_or(g, "atol", w, c.integrator.atol);
    c.integrator.max_step = read_num_or(g, "max_step", w, c.integrator.max_step);
    c.integrator.max_steps = static_cast<long>(read_num_or(g, "max_steps", w, double(c.integrator.max_steps)));
    try {
      c.integrator.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("integrator: ") + e.what());
    }
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    const char* w = "grid";
    c.grid.x_min = read_num_or(g, "r_min", w, c.grid.x_min);
    c.grid.x_max = read_num_or(g, "r_max", w, c.grid.x_max);
    c.grid.nx = static_cast<int>(read_num_or(g, "nr", w, c.grid.nx));
    c.grid.y_min = read_num_or(g, "w_min", w, c.grid.y_min);
    c.grid.y_max = read_num_or(g, "w_max", w, c.grid.y_max);
    c.grid.ny = static_cast<int>(read_num_or(g, "nw", w, c.grid.ny));
    if (c.grid.nx < 2 || c.grid.ny < 2) throw ConfigError("grid: nr and nw must be >= 2");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

Json to_json(const ModelParams& p) {
  return Json{{"a1", num(p.a1)}, {"a2", num(p.a2)}, {"b1", num(p.b1)}, {"b2", num(p.b2)},
              {"d1", num(p.d1)}, {"d2", num(p.d2)}, {"k", num(p.k)},   {"rho", num(p.rho)}};
}

Json to_json(const HopfSetup& s) {
  Json j{{"a1", num(s.a1)}, {"a2", num(s.a2)}, {"b1", num(s.b1)}, {"b2", num(s.b2)}, {"d1", num(s.d1)},
         {"l", num(s.l)},   {"m", num(s.m)},   {"epsilon", num(s.epsilon)}};
  j["k_override"] = s.k_override ? num(*s.k_override) : Json(nullptr);
  return j;
}

Json to_json(const Equilibrium& e) {
  Json j{{"label", std::string(to_string(e.label))}, {"exists", e.exists}};
  if (e.exists) {
    j["state"] = vec(e.state);
    j["residual"] = num(e.residual);
  } else {
    j["reason"] = e.reason;
  }
  return j;
}

Json to_json(const SpectrumAtP3& s) {
  return Json{{"lambda_plus", cplx(s.lambda_plus)},
              {"lambda_minus", cplx(s.lambda_minus)},
              {"mu", num(s.mu)},
              {"Delta", num(s.Delta)}};
}

Json to_json(const ConstrainedValues& v) {
  return Json{{"k", num(v.k)}, {"rho", num(v.rho)}, {"d2", num(v.d2)}, {"E", num(v.E)}, {"a1b1_minus_2b2d1", num(v.l3_margin)}};
}

Json to_json(const Radicands& r) { return Json{{"R1", num(r.R1)}, {"R2", num(r.R2)}, {"W2", num(r.W2)}}; }

Json to_json(const CyclePrediction& p) {
  Json j{{"branch", to_string(p.branch)}, {"exists", p.exists}, {"radicands", to_json(p.radicand)}};
  if (!p.exists) {
    j["failing_radicand"] = p.failing_radicand;
    return j;
  }
  j["closed_form"] = vec(p.closed_form);
  j["zero"] = vec(p.zero);
  j["refined"] = p.refined;
  j["refinement_shift"] = num(p.refinement_shift);
  j["jacobian"] = mat(p.jac);
  j["jacobian_fd_mismatch"] = num(p.jac_fd_mismatch);
  j["eigenvalues_theta"] = Json{cplx(p.eigenvalues[0]), cplx(p.eigenvalues[1])};
  j["eigenvalues_time"] = Json{cplx(p.time_eigenvalues[0]), cplx(p.time_eigenvalues[1])};
  j["stability"] = to_string(p.stability);
  j["stability_theta"] = to_string(p.theta_stability);
  j["half_space"] = to_string(p.half_space);
  j["initial_condition_xyz"] = p.initial_condition_xyz ? vec(*p.initial_condition_xyz) : Json(nullptr);
  return j;
}

Json to_json(const AveragedZero& z) {
  Json e = Json::array();
  for (auto c : z.eigenvalues) e.push_back(cplx(c));
  return Json{{"z0", vec(z.z0)},
              {"eigenvalues", e},
              {"determinant", num(z.determinant)},
              {"degree_nonzero", z.degree_nonzero},
              {"residual", num(z.residual)},
              {"iterations", z.iterations},
              {"seed_index", z.seed_index}};
}

Json to_json(const PoincareRecord& r) {
  Json returns = Json::array();
  for (std::size_t i = 0; i < r.return_points.size(); ++i)
    returns.push_back(Json{{"t", num(r.return_times[i])}, {"x", vec(r.return_points[i])}});
  Json mult = Json::array();
  for (auto c : r.floquet.multipliers) mult.push_back(cplx(c));
  return Json{{"branch", to_string(r.branch)},
              {"epsilon", num(r.epsilon)},
              {"section", Json{{"point", vec(r.section.point)}, {"normal", vec(r.section.normal)}}},
              {"predicted", vec(r.predicted)},
              {"returns", returns},
              {"cycle_point", vec(r.cycle_point)},
              {"period", num(r.period)},
              {"linear_period", num(r.linear_period)},
              {"iterations", r.iterations},
              {"closure", num(r.closure)},
              {"distance", num(r.distance)},
              {"return_map_jacobian", mat(r.return_map_jacobian)},
              {"multipliers", mult},
              {"trivial_defect", num(r.floquet.trivial_defect)},
              {"stable", r.stable()},
              {"z_min", num(r.z_min)},
              {"z_max", num(r.z_max)}};
}

Json to_json(const ScanResult& s) {
  Json entries = Json::array();
  for (const ScanEntry& e : s.entries) {
    if (e.record) entries.push_back(to_json(*e.record));
    else entries.push_back(Json{{"epsilon", num(e.epsilon)}, {"error", e.error}});
  }
  Json orders = Json::array(), ratios = Json::array();
  for (double o : s.orders) orders.push_back(num(o));
  for (double r : s.halving_ratios) ratios.push_back(num(r));
  return Json{{"branch", to_string(s.branch)}, {"entries", entries}, {"orders", orders}, {"halving_ratios", ratios}};
}

CyclePrediction prediction_from_json(const Json& j) {
  CyclePrediction p;
  const std::string b = j.at("branch").get<std::string>();
  for (CycleBranch c : {CycleBranch::in_plane, CycleBranch::upper, CycleBranch::lower})
    if (b == to_string(c)) p.branch = c;
  p.exists = j.at("exists").get<bool>();
  const Json& r = j.at("radicands");
  p.radicand = {read_or_nan(r, "R1"), read_or_nan(r, "R2"), read_or_nan(r, "W2")};
  if (!p.exists) {
    p.failing_radicand = j.at("failing_radicand").get<std::string>();
    return p;
  }
  auto v2 = [](const Json& a) {
    return Eigen::Vector2d(a.at(0).is_number() ? a.at(0).get<double>() : NAN,
                           a.at(1).is_number() ? a.at(1).get<double>() : NAN);
  };
  auto c2 = [](const Json& a) {
    return std::complex<double>(a.at("re").get<double>(), a.at("im").get<double>());
  };
  p.closed_form = v2(j.at("closed_form"));
  p.zero = v2(j.at("zero"));
  p.refined = j.at("refined").get<bool>();
  p.refinement_shift = read_or_nan(j, "refinement_shift");
  for (int i = 0; i < 2; ++i) p.jac.row(i) = v2(j.at("jacobian").at(i)).transpose();
  p.jac_fd_mismatch = read_or_nan(j, "jacobian_fd_mismatch");
  for (std::size_t i = 0; i < 2; ++i) {
    p.eigenvalues[i] = c2(j.at("eigenvalues_theta").at(i));
    p.time_eigenvalues[i] = c2(j.at("eigenvalues_time").at(i));
  }
  auto stab = [](const std::string& s) {
    for (Stability c : {Stability::repeller, Stability::attractor, Stability::saddle_like, Stability::indeterminate})
      if (s == to_string(c)) return c;
    throw ConfigError("unknown stability label " + s);
  };
  p.stability = stab(j.at("stability").get<std::string>());
  p.theta_stability = stab(j.at("stability_theta").get<std::string>());
  const std::string hs = j.at("half_space").get<std::string>();
  for (HalfSpace h : {HalfSpace::z_positive, HalfSpace::z_zero, HalfSpace::z_negative})
    if (hs == to_string(h)) p.half_space = h;
  if (!j.at("initial_condition_xyz").is_null()) {
    const Json& a = j.at("initial_condition_xyz");
    p.initial_condition_xyz = StateVec(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
  }
  return p;
}

void write_trajectory_csv(const Trajectory<3>& tr, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
  out << "t,x,y,z\n" << std::setprecision(17);
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    out << tr.t[i] << ',' << tr.y[i][0] << ',' << tr.y[i][1] << ',' << tr.y[i][2] << '\n';
}

}  // namespace tritrophic
