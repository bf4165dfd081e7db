#pragma once

// JSON and CSV exchange formats. Non-finite numbers are written as null;
// complex numbers as {"re": .., "im": ..}.

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <vector>

#include "tritrophic/averaging.hpp"
#include "tritrophic/cycles.hpp"
#include "tritrophic/dynamics.hpp"
#include "tritrophic/equilibria.hpp"
#include "tritrophic/hopf.hpp"

namespace tritrophic {

using Json = nlohmann::ordered_json;

/// A run configuration: exactly one of a raw parameter set ("model") or a
/// Hopf setup ("hopf"), plus command options.
struct RunConfig {
  std::optional<ModelParams> model;
  std::optional<HopfSetup> hopf;
  std::vector<double> epsilons{0.05, 0.02, 0.01};
  IntegratorConfig integrator{};
  Grid2 grid{};
};

/// Throw ConfigError naming the offending field.
ModelParams params_from_json(const Json& j);
HopfSetup setup_from_json(const Json& j);
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::filesystem::path& path);

Json to_json(const ModelParams& p);
Json to_json(const HopfSetup& s);
Json to_json(const Equilibrium& e);
Json to_json(const SpectrumAtP3& s);
Json to_json(const ConstrainedValues& v);
Json to_json(const Radicands& r);
Json to_json(const CyclePrediction& p);
Json to_json(const AveragedZero& z);
Json to_json(const PoincareRecord& r);
Json to_json(const ScanResult& s);

/// Inverse of to_json(CyclePrediction) for the fields it carries.
CyclePrediction prediction_from_json(const Json& j);

/// t, x, y, z rows.
void write_trajectory_csv(const Trajectory<3>& tr, const std::filesystem::path& path);

}  // namespace tritrophic
