#include "cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tritrophic/averaging.hpp"
#include "tritrophic/cycles.hpp"
#include "tritrophic/dynamics.hpp"
#include "tritrophic/equilibria.hpp"
#include "tritrophic/errors.hpp"
#include "tritrophic/food_chain_averaging.hpp"
#include "tritrophic/hopf.hpp"
#include "tritrophic/serialize.hpp"

namespace tritrophic::cli {

namespace {

struct Options {
  std::string config;
  bool json = false;
  std::string csv_dir;
  std::vector<double> epsilons;
  int parallel = 1;
  bool grid_scan = false;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

std::string fmt(std::complex<double> c, int prec = 6) {
  if (c.imag() == 0.0) return fmt(c.real(), prec);
  std::ostringstream s;
  s << std::setprecision(prec) << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
  return s.str();
}

Exec exec_of(const Options& o) { return o.parallel > 1 ? Exec::parallel : Exec::serial; }

RunConfig require_config(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config PATH is required for this command");
  RunConfig c = load_config(o.config);
  if (!o.epsilons.empty()) c.epsilons = o.epsilons;
  return c;
}

HopfSetup require_setup(const RunConfig& c, const char* cmd) {
  if (!c.hopf) throw ConfigError(std::string(cmd) + " needs a 'hopf' block in the config");
  return *c.hopf;
}

/// Raw parameters, either given or derived from the Hopf setup.
ModelParams params_of(const RunConfig& c) {
  if (c.model) {
    validate(*c.model);
    return *c.model;
  }
  return solve_constraints(*c.hopf);
}

std::filesystem::path csv_path(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.csv_dir);
  return std::filesystem::path(o.csv_dir) / name;
}

int cmd_equilibria(const Options& o, std::ostream& out) {
  const RunConfig c = require_config(o);
  const ModelParams p = params_of(c);
  const auto eqs = all_equilibria(p);
  if (o.json) {
    Json j{{"params", to_json(p)}, {"equilibria", Json::array()}};
    for (const auto& e : eqs) j["equilibria"].push_back(to_json(e));
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "label  exists  x                 y                 z                 residual / reason\n";
  for (const auto& e : eqs) {
    out << std::left << std::setw(7) << to_string(e.label) << std::setw(8) << (e.exists ? "yes" : "no");
    if (e.exists)
      out << std::setw(18) << fmt(e.state[0], 10) << std::setw(18) << fmt(e.state[1], 10) << std::setw(18)
          << fmt(e.state[2], 10) << fmt(e.residual, 3) << '\n';
    else
      out << e.reason << '\n';
  }
  return kOk;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const RunConfig c = require_config(o);
  const ModelParams p = params_of(c);
  const SpectrumAtP3 sp = spectrum_p3(p);
  Json j{{"params", to_json(p)}, {"p3", Json::array()}, {"spectrum", to_json(sp)}};
  const StateVec p3 = p3_state(p);
  for (int i = 0; i < 3; ++i) j["p3"].push_back(p3[i]);
  if (c.hopf) {
    const ExpectedSpectrum ex = expected_spectrum(*c.hopf);
    j["expected"] = Json{{"lambda_plus", Json{{"re", ex.lambda_plus.real()}, {"im", ex.lambda_plus.imag()}}},
                         {"lambda_minus", Json{{"re", ex.lambda_minus.real()}, {"im", ex.lambda_minus.imag()}}},
                         {"mu", ex.mu}};
  }
  if (o.json) {
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "p3       = (" << fmt(p3[0], 10) << ", " << fmt(p3[1], 10) << ", " << fmt(p3[2], 10) << ")\n"
      << "lambda+  = " << fmt(sp.lambda_plus, 10) << "\nlambda-  = " << fmt(sp.lambda_minus, 10)
      << "\nmu       = " << fmt(sp.mu, 10) << "\nDelta    = " << fmt(sp.Delta, 10) << '\n';
  if (c.hopf) {
    const ExpectedSpectrum ex = expected_spectrum(*c.hopf);
    out << "expected: lambda+ = " << fmt(ex.lambda_plus, 10) << ", mu = " << fmt(ex.mu, 10) << '\n';
  }
  return kOk;
}

int cmd_constraints(const Options& o, std::ostream& out) {
  const RunConfig c = require_config(o);
  const HopfSetup s = require_setup(c, "constraints");
  const ConstrainedValues v = constrained_values(s);
  const ModelParams p = solve_constraints(s);
  HopfSetup s0 = s;
  s0.epsilon = 0.0;
  const DegeneracyCheck dc = check_degeneracy(solve_constraints(s0));
  if (o.json) {
    out << Json{{"setup", to_json(s)},
                {"constrained", to_json(v)},
                {"params", to_json(p)},
                {"degeneracy_at_eps0",
                 Json{{"d2_residual", dc.d2_residual},
                      {"rho_residual", dc.rho_residual},
                      {"k_residual", dc.k_residual},
                      {"satisfied", dc.satisfied()}}}}
               .dump(2)
        << '\n';
    return kOk;
  }
  out << "k                = " << fmt(v.k, 10) << "\nrho              = " << fmt(v.rho, 10)
      << "\nd2               = " << fmt(v.d2, 10) << "\na1 b1 - 2 b2 d1  = " << fmt(v.l3_margin, 10)
      << "\ndegenerate at eps=0: " << (dc.satisfied() ? "yes" : "no") << '\n';
  return kOk;
}

struct GridScanReport {
  std::vector<SignChangeCell> cells;
  ZeroSearch refined;
  std::vector<Eigen::Vector2d> extra;  // r > 0 zeros not among the predictions
};

GridScanReport grid_scan(const HopfSetup& s, const Grid2& g, const std::vector<CyclePrediction>& preds, Exec exec) {
  GridScanReport rep;
  rep.cells = sign_change_scan([&s](double r, double w) { return closed_F20(s, r, w); }, g, exec);
  std::vector<VecX> seeds;
  for (const auto& c : rep.cells) seeds.push_back(c.center);
  rep.refined = find_zeros(closed_averaged_field(s), seeds, {}, exec);
  for (const auto& z : rep.refined.zeros) {
    if (!(z.z0[0] > 1e-9)) continue;
    bool known = false;
    for (const auto& p : preds)
      if (p.exists && (z.z0 - VecX(p.zero)).norm() <= 1e-6 * std::max(1.0, p.zero.norm())) known = true;
    if (!known) rep.extra.push_back(z.z0);
  }
  return rep;
}

int cmd_predict(const Options& o, std::ostream& out) {
  const RunConfig c = require_config(o);
  const HopfSetup s = require_setup(c, "predict");
  solve_constraints(s);
  const auto preds = predict_cycles(s);
  std::optional<GridScanReport> scan;
  if (o.grid_scan) scan = grid_scan(s, c.grid, preds, exec_of(o));

  if (o.json) {
    Json j{{"setup", to_json(s)}, {"predictions", Json::array()}};
    for (const auto& p : preds) j["predictions"].push_back(to_json(p));
    if (scan) {
      Json extra = Json::array();
      for (const auto& e : scan->extra) extra.push_back(Json{e[0], e[1]});
      j["grid_scan"] = Json{{"cells", scan->cells.size()},
                            {"zeros", scan->refined.zeros.size()},
                            {"extra_zeros", extra}};
    }
    out << j.dump(2) << '\n';
  } else {
    const Radicands R = radicands(s);
    out << "R1 = " << fmt(R.R1, 10) << "  R2 = " << fmt(R.R2, 10) << "  W2 = " << fmt(R.W2, 10) << "\n";
    for (const auto& p : preds) {
      out << to_string(p.branch) << ": ";
      if (!p.exists) {
        out << "does not exist (" << p.failing_radicand << " <= 0)\n";
        continue;
      }
      out << "closed form (" << fmt(p.closed_form[0], 10) << ", " << fmt(p.closed_form[1], 10) << "), refined ("
          << fmt(p.zero[0], 10) << ", " << fmt(p.zero[1], 10) << "), shift " << fmt(p.refinement_shift, 2)
          << "\n    eigenvalues (theta) " << fmt(p.eigenvalues[0]) << ", " << fmt(p.eigenvalues[1])
          << "  (time) " << fmt(p.time_eigenvalues[0]) << ", " << fmt(p.time_eigenvalues[1]) << "\n    stability "
          << to_string(p.stability) << "  half-space " << to_string(p.half_space) << '\n';
    }
    if (scan) {
      out << "grid scan: " << scan->cells.size() << " sign-change cells, " << scan->refined.zeros.size()
          << " distinct zeros, " << scan->extra.size() << " with r > 0 beyond the predictions\n";
      for (const auto& e : scan->extra) out << "    extra zero (" << fmt(e[0], 10) << ", " << fmt(e[1], 10) << ")\n";
    }
  }
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = require_config(o);
  for (double e : c.epsilons)
    if (!(e > 0.0))
      throw ConfigError("epsilon values must be > 0 (the rescaling (R, W) = eps (r, w) is undefined at 0)");
  const HopfSetup s = require_setup(c, "verify");
  const auto preds = predict_cycles(s);
  bool all_ok = true;
  Json j{{"setup", to_json(s)}, {"scans", Json::array()}};
  for (const auto& p : preds) {
    if (!p.exists) {
      if (!o.json) out << to_string(p.branch) << ": no prediction (" << p.failing_radicand << " <= 0)\n";
      continue;
    }
    const ScanResult sr = verify_scan(s, p, c.epsilons, c.integrator, {}, exec_of(o));
    j["scans"].push_back(to_json(sr));
    if (!o.json) {
      out << to_string(p.branch) << " (averaging class " << to_string(p.stability) << ")\n"
          << "    eps        period       distance     |mu1|          |mu2|          z range\n";
    }
    for (const auto& e : sr.entries) {
      if (!e.record) {
        all_ok = false;
        if (!o.json) out << "    " << std::left << std::setw(11) << fmt(e.epsilon) << "failed: " << e.error << '\n';
        continue;
      }
      const PoincareRecord& r = *e.record;
      if (!o.json)
        out << "    " << std::left << std::setw(11) << fmt(e.epsilon) << std::setw(13) << fmt(r.period, 8)
            << std::setw(13) << fmt(r.distance, 4) << std::setw(15) << fmt(std::abs(r.nontrivial[0]), 10)
            << std::setw(15) << fmt(std::abs(r.nontrivial[1]), 10) << "[" << fmt(r.z_min, 4) << ", "
            << fmt(r.z_max, 4) << "]\n";
      if (!o.csv_dir.empty()) {
        HopfSetup se = s;
        se.epsilon = r.epsilon;
        const Trajectory<3> tr = integrate(solve_constraints(se), r.cycle_point, 0.0, r.period, c.integrator);
        write_trajectory_csv(tr, csv_path(o, std::string("cycle_") +
                                                 (p.branch == CycleBranch::in_plane ? "r1" :
                                                  p.branch == CycleBranch::upper    ? "r2_plus" :
                                                                                      "r2_minus") +
                                                 "_eps" + fmt(r.epsilon) + ".csv"));
      }
    }
    if (!o.json)
      for (std::size_t i = 0; i < sr.orders.size(); ++i)
        out << "    order " << fmt(sr.orders[i], 4) << " (ratio per halving " << fmt(sr.halving_ratios[i], 4) << ")\n";
  }
  if (o.json) out << j.dump(2) << '\n';
  if (!all_ok) {
    err << "some cycles were not located; see the report\n";
    return kNoConvergence;
  }
  return kOk;
}

// Printed values of the worked example, and the decimals they carry.
struct Printed {
  const char* name;
  double ours;
  double printed;
  int decimals;
};

bool agrees(const Printed& p) { return std::abs(p.ours - p.printed) <= 0.5 * std::pow(10.0, -p.decimals) + 1e-12; }

int cmd_reproduce(const Options& o, std::ostream& out) {
  const HopfSetup s{5.0, 0.1, 3.0, 2.0, 0.4, 400.0, 1.0, 0.0, std::nullopt};
  const ConstrainedValues v = constrained_values(s);
  const auto preds = predict_cycles(s);

  std::vector<Printed> rows{{"d2", v.d2, 0.09, 2}, {"rho", v.rho, 27.74, 2}, {"k", v.k, 0.13, 2},
                            {"a1 b1 - 2 b2 d1", v.l3_margin, 13.4, 1}};
  const CyclePrediction& c1 = preds[0];
  const CyclePrediction& c2 = preds[1];
  rows.push_back({"r1", c1.exists ? c1.zero[0] : NAN, 221.16, 2});
  rows.push_back({"w1", c1.exists ? c1.zero[1] : NAN, 0.0, 2});
  rows.push_back({"r2", c2.exists ? c2.zero[0] : NAN, 207.24, 2});
  rows.push_back({"w2", c2.exists ? c2.zero[1] : NAN, 39.0, 0});
  rows.push_back({"(r1,0) eigenvalue 1", c1.exists ? c1.time_eigenvalues[0].real() : NAN, -0.32, 2});
  rows.push_back({"(r1,0) eigenvalue 2", c1.exists ? c1.time_eigenvalues[1].real() : NAN, -154.96, 2});
  rows.push_back({"(r2,w2) eigenvalue 1", c2.exists ? c2.time_eigenvalues[0].real() : NAN, -0.29, 2});
  rows.push_back({"(r2,w2) eigenvalue 2", c2.exists ? c2.time_eigenvalues[1].real() : NAN, -135.14, 2});

  int attractors = 0;
  for (const auto& p : preds) attractors += p.exists && p.stability == Stability::attractor;

  // Same free parameters at l = 500, where the printed radii reappear.
  HopfSetup s500 = s;
  s500.l = 500.0;
  const auto p500 = predict_cycles(s500);

  if (o.json) {
    Json j{{"setup", to_json(s)}, {"constrained", to_json(v)}, {"comparison", Json::array()}, {"predictions", Json::array()}};
    for (const auto& r : rows)
      j["comparison"].push_back(Json{{"quantity", r.name},
                                     {"computed", std::isfinite(r.ours) ? Json(r.ours) : Json(nullptr)},
                                     {"printed", r.printed},
                                     {"agrees", agrees(r)}});
    for (const auto& p : preds) j["predictions"].push_back(to_json(p));
    j["attractors"] = attractors;
    j["printed_stability"] = "Attractor for all three";
    j["l500_predictions"] = Json::array();
    for (const auto& p : p500) j["l500_predictions"].push_back(to_json(p));
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "worked example: a1=5 a2=0.1 b1=3 b2=2 d1=0.4 l=400 m=1\n\n"
      << std::left << std::setw(24) << "quantity" << std::setw(18) << "computed" << std::setw(12) << "printed"
      << "agrees\n";
  for (const auto& r : rows)
    out << std::setw(24) << r.name << std::setw(18) << (std::isfinite(r.ours) ? fmt(r.ours, 8) : "missing")
        << std::setw(12) << fmt(r.printed) << (agrees(r) ? "yes" : "NO") << '\n';
  out << "\nradicands: R1 = " << fmt(c1.radicand.R1, 8) << ", R2 = " << fmt(c1.radicand.R2, 8)
      << ", W2 = " << fmt(c1.radicand.W2, 8) << '\n';
  for (const auto& p : preds) {
    out << to_string(p.branch) << ": ";
    if (!p.exists) {
      out << "no zero (" << p.failing_radicand << " <= 0)\n";
      continue;
    }
    out << "zero (" << fmt(p.zero[0], 10) << ", " << fmt(p.zero[1], 10) << "), time eigenvalues "
        << fmt(p.time_eigenvalues[0]) << ", " << fmt(p.time_eigenvalues[1]) << ", " << to_string(p.stability)
        << ", " << to_string(p.half_space) << '\n';
  }
  out << "stability column: " << attractors << " of 3 Attractor (printed: all three)\n"
      << "\nsame parameters with l = 500:\n";
  for (const auto& p : p500) {
    out << to_string(p.branch) << ": ";
    if (!p.exists) {
      out << "no zero (" << p.failing_radicand << " <= 0)\n";
      continue;
    }
    out << "zero (" << fmt(p.zero[0], 10) << ", " << fmt(p.zero[1], 10) << "), time eigenvalues "
        << fmt(p.time_eigenvalues[0]) << ", " << fmt(p.time_eigenvalues[1]) << ", " << to_string(p.stability) << '\n';
  }
  return kOk;
}

int cmd_dump_field(const Options& o, std::ostream& out) {
  const RunConfig c = require_config(o);
  const HopfSetup s = require_setup(c, "dump-field");
  if (o.csv_dir.empty()) {
    out << "r,w,F201,F202\n" << std::setprecision(17);
    for (int i = 0; i < c.grid.nx; ++i)
      for (int j = 0; j < c.grid.ny; ++j) {
        const Eigen::Vector2d v = closed_F20(s, c.grid.x(i), c.grid.y(j));
        out << c.grid.x(i) << ',' << c.grid.y(j) << ',' << v[0] << ',' << v[1] << '\n';
      }
    return kOk;
  }
  const auto path = csv_path(o, "averaged_field.csv");
  dump_closed_field_csv(s, c.grid, path);
  out << "wrote " << path.string() << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Triple Hopf bifurcation analysis of a tritrophic food chain"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "JSON run configuration");
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--csv-dir", o.csv_dir, "directory for CSV output");
  app.add_option("--epsilon", o.epsilons, "comma-separated epsilon values")->delimiter(',');
  app.add_option("--parallel", o.parallel, "OpenMP threads for independent work")->check(CLI::PositiveNumber);

  auto* eq = app.add_subcommand("equilibria", "the six singular points");
  auto* sp = app.add_subcommand("spectrum", "eigenvalues at p3");
  auto* cons = app.add_subcommand("constraints", "derived k, rho, d2");
  auto* pred = app.add_subcommand("predict", "limit-cycle predictions from the averaged field");
  pred->add_flag("--grid-scan", o.grid_scan, "sign-change scan for further zeros");
  auto* ver = app.add_subcommand("verify", "locate the cycles on the full system");
  auto* rep = app.add_subcommand("reproduce-example", "the worked example against its printed values");
  auto* dump = app.add_subcommand("dump-field", "CSV grid of the second-order averaged field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (o.parallel > 1) omp_set_num_threads(o.parallel);
  try {
    if (eq->parsed()) return cmd_equilibria(o, out);
    if (sp->parsed()) return cmd_spectrum(o, out);
    if (cons->parsed()) return cmd_constraints(o, out);
    if (pred->parsed()) return cmd_predict(o, out);
    if (ver->parsed()) return cmd_verify(o, out, err);
    if (rep->parsed()) return cmd_reproduce(o, out);
    if (dump->parsed()) return cmd_dump_field(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ConstraintViolation& e) {
    err << "constraint violation: " << e.what() << '\n';
    return kConstraintViolation;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kConstraintViolation;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace tritrophic::cli
