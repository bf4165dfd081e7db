#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using tritrophic::cli::run;

namespace {

const std::string kData = TRITROPHIC_TEST_DATA;

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tritrophic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("equilibria from a model config") {
  const Result r = invoke({"--config", kData + "/model.json", "equilibria"});
  CHECK(r.code == 0);
  CHECK(r.out.find("p3") != std::string::npos);
  const Result j = invoke({"--config", kData + "/model.json", "--json", "equilibria"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["equilibria"].size() == 6);
}

TEST_CASE("config errors exit with 2") {
  CHECK(invoke({"--config", kData + "/missing_field.json", "equilibria"}).code == 2);
  const Result r = invoke({"--config", kData + "/missing_field.json", "equilibria"});
  CHECK(r.err.find("'k'") != std::string::npos);
  CHECK(invoke({"--config", kData + "/malformed.json", "spectrum"}).code == 2);
  CHECK(invoke({"--config", kData + "/both_sections.json", "spectrum"}).code == 2);
  CHECK(invoke({"--config", kData + "/nope.json", "spectrum"}).code == 2);
  CHECK(invoke({"equilibria"}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({"--config", kData + "/example.json", "--epsilon", "0", "verify"}).code == 2);
  CHECK(invoke({"--config", kData + "/example.json", "--epsilon", "-0.01", "verify"}).code == 2);
  CHECK(invoke({"--config", kData + "/example.json", "--parallel", "0", "predict"}).code == 2);
}

TEST_CASE("constraint violations exit with 4") {
  const Result r = invoke({"--config", kData + "/violates_constraints.json", "constraints"});
  CHECK(r.code == 4);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("predict reports the worked example") {
  const Result r = invoke({"--config", kData + "/example.json", "--json", "predict"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  const auto& preds = doc["predictions"];
  REQUIRE(preds.size() == 3);
  CHECK(preds[0]["exists"] == true);
  CHECK(preds[1]["exists"] == false);
  CHECK(preds[1]["failing_radicand"] == "W2");
}

TEST_CASE("verify succeeds at small eps and fails with 3 when the orbit escapes") {
  const Result ok = invoke({"--config", kData + "/example.json", "verify"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("order") != std::string::npos);
  const Result bad = invoke({"--config", kData + "/example.json", "--epsilon", "0.05", "verify"});
  CHECK(bad.code == 3);
}

TEST_CASE("verify writes cycle CSVs") {
  const auto dir = std::filesystem::temp_directory_path() / "tritrophic_cli_csv";
  std::filesystem::remove_all(dir);
  const Result r =
      invoke({"--config", kData + "/example_l500.json", "--csv-dir", dir.string(), "--parallel", "2", "verify"});
  CHECK(r.code == 0);
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.path().extension() == ".csv";
  CHECK(files == 6);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reproduce-example and dump-field") {
  const Result r = invoke({"reproduce-example"});
  CHECK(r.code == 0);
  CHECK(r.out.find("27.738") != std::string::npos);
  const Result d = invoke({"--config", kData + "/example.json", "dump-field"});
  CHECK(d.code == 0);
  CHECK(d.out.rfind("r,w,F201,F202\n", 0) == 0);
}
