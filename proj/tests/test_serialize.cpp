#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "common.hpp"
#include "tritrophic/errors.hpp"
#include "tritrophic/serialize.hpp"

using namespace tritrophic;

namespace {

std::string config_error(const Json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("configs parse and name the offending field") {
  const Json good = Json::parse(R"({"hopf": {"a1": 5, "a2": 0.1, "b1": 3, "b2": 2, "d1": 0.4, "l": 400, "m": 1},
                                    "epsilon": [0.01, 0.005], "integrator": {"rtol": 1e-9}})");
  const RunConfig c = config_from_json(good);
  REQUIRE(c.hopf);
  CHECK_FALSE(c.model);
  CHECK(c.hopf->l == 400.0);
  CHECK(c.hopf->epsilon == 0.0);
  CHECK(c.epsilons == std::vector<double>{0.01, 0.005});
  CHECK(c.integrator.rtol == 1e-9);

  CHECK(config_error(Json::parse(R"({"model": {"a1": 1}})")) == "model: missing field 'a2'");
  CHECK(config_error(Json::parse(R"({"hopf": {"a1": 5, "a2": "x"}})")) == "hopf: field 'a2' must be a number");
  CHECK_FALSE(config_error(Json::parse(R"({})")).empty());
  CHECK_FALSE(config_error(Json::parse(R"({"hopf": {}, "model": {}})")).empty());
  CHECK_FALSE(config_error(Json::parse(R"([1, 2])")).empty());
  CHECK_FALSE(config_error(Json::parse(R"({"hopf": {"a1": 5, "a2": 0.1, "b1": 3, "b2": 2, "d1": 0.4, "l": 400,
                                          "m": 1}, "epsilon": []})")).empty());
}

TEST_CASE("missing and malformed files") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  const auto path = std::filesystem::temp_directory_path() / "tritrophic_malformed.json";
  std::ofstream(path) << "{\"hopf\": ";
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("non-finite numbers become null") {
  Equilibrium e;
  e.exists = true;
  e.state = StateVec(1.0, NAN, INFINITY);
  const Json j = to_json(e);
  CHECK(j["state"][0] == 1.0);
  CHECK(j["state"][1].is_null());
  CHECK(j["state"][2].is_null());
}

TEST_CASE("predictions round-trip through JSON") {
  HopfSetup s = testing::example_setup(0.01);
  s.l = 500.0;
  for (const auto& p : predict_cycles(s)) {
    const Json j = to_json(p);
    const CyclePrediction q = prediction_from_json(Json::parse(j.dump()));
    CHECK(q.branch == p.branch);
    CHECK(q.exists == p.exists);
    CHECK(q.zero == p.zero);
    CHECK(q.jac == p.jac);
    CHECK(q.stability == p.stability);
    CHECK(q.half_space == p.half_space);
    CHECK(q.time_eigenvalues[0] == p.time_eigenvalues[0]);
    CHECK(to_json(q) == j);
  }
  const auto missing = predict_cycles(testing::example_setup())[1];
  const CyclePrediction q = prediction_from_json(to_json(missing));
  CHECK_FALSE(q.exists);
  CHECK(q.failing_radicand == "W2");
}

TEST_CASE("trajectory CSV") {
  const ModelParams p = solve_constraints(testing::example_setup());
  const auto tr = integrate(p, StateVec(0.3, 16.0, 0.1), 0.0, 1.0);
  const auto path = std::filesystem::temp_directory_path() / "tritrophic_traj.csv";
  write_trajectory_csv(tr, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x,y,z");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == tr.t.size());
  std::filesystem::remove(path);
}
