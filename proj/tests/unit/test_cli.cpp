#include "doctest.h"

#include "momentlab_cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "momentlab_unit_cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  return {code, o.str(), e.str()};
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("config round trip") {
  cli::ExperimentConfig c;
  c.command = "trace-flow";
  c.model = "morse-chart";
  c.params = {{"d_plus", 2}, {"d_minus", 1}};
  c.seed = 77;
  c.tolerance = 1e-9;
  c.samples = 12;
  c.x0 = {0.1, 0.2, 0.3};
  c.xi = {1};
  c.t_end = 1.5;
  c.normalized = true;
  CHECK(cli::config_from_json(cli::to_json(c)) == c);

  const fs::path dir = scratch("roundtrip");
  cli::save_config(c, (dir / "c.json").string());
  CHECK(cli::load_config((dir / "c.json").string()) == c);

  // unset optionals survive as null
  cli::ExperimentConfig bare;
  bare.command = "loopgroup";
  CHECK(cli::to_json(bare)["tolerance"].is_null());
  CHECK(cli::config_from_json(cli::to_json(bare)) == bare);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(cli::config_from_json(json{{"bogus", 1}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"command", "fly"}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"samples", 1.5}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"samples", -3}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"seed", -1}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"params", {{"n", "two"}}}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json{{"plot", 1}}), cli::ConfigError);
  CHECK_THROWS_AS(cli::config_from_json(json::array()), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config("/nonexistent/momentlab.json"), cli::ConfigError);

  const fs::path dir = scratch("validation");
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(cli::load_config((dir / "broken.json").string()), cli::ConfigError);
}

TEST_CASE("parameter and vector parsing") {
  CHECK(cli::parse_param("n=3") == std::pair<std::string, double>{"n", 3.0});
  CHECK(cli::parse_param("sigma=-0.25").second == -0.25);
  CHECK_THROWS_AS(cli::parse_param("n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_param("=3"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_param("n="), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_param("n=3x"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_param("n=nan"), cli::ConfigError);
  CHECK(cli::parse_vector("1,2.5,-3") == std::vector<double>{1, 2.5, -3});
  CHECK_THROWS_AS(cli::parse_vector("1,,2"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_vector("a"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_vector(""), cli::ConfigError);
}

TEST_CASE("model files") {
  const fs::path dir = scratch("modelfile");
  std::ofstream(dir / "m.json") << R"({"name": "sphere-product", "params": {"n": 2}})";
  const auto m = cli::load_model_spec((dir / "m.json").string());
  CHECK(m.name == "sphere-product");
  CHECK(m.params.at("n") == 2.0);
  std::ofstream(dir / "bad.json") << R"({"name": "sphere", "extra": 1})";
  CHECK_THROWS_AS(cli::load_model_spec((dir / "bad.json").string()), cli::ConfigError);
  std::ofstream(dir / "noname.json") << R"({"params": {}})";
  CHECK_THROWS_AS(cli::load_model_spec((dir / "noname.json").string()), cli::ConfigError);

  const auto r = invoke({"even-index", "--model-file", (dir / "m.json").string(), "--out",
                         (dir / "out").string()});
  CHECK(r.code == cli::kExitPass);
  CHECK(read_json(dir / "out" / "report.json")["model"]["name"] == "sphere-product");
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("exit");
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"--help"}).code == cli::kExitPass);
  CHECK(invoke({"fly"}).code == cli::kExitUsage);
  CHECK(invoke({"trace-flow", "--bogus"}).code == cli::kExitUsage);
  CHECK(invoke({"trace-flow", "--model", "no-such-model", "--out", (dir / "a").string()}).code ==
        cli::kExitUsage);
  CHECK(invoke({"trace-flow", "--model", "sphere", "--x0", "0,0,0", "--out", (dir / "b").string()}).code ==
        cli::kExitUsage);
  CHECK(invoke({"loopgroup", "--param", "K=0", "--out", (dir / "c").string()}).code == cli::kExitUsage);
  CHECK(invoke({"even-index", "--model", "sphere", "--xi", "0", "--out", (dir / "d").string()}).code ==
        cli::kExitUsage);
  CHECK(invoke({"even-index", "--model", "sphere", "--tol", "1", "--out", (dir / "e").string()}).code ==
        cli::kExitUsage);
  const auto ok = invoke({"verify-convexity", "--model", "sphere", "--samples", "2000", "--out",
                          (dir / "f").string()});
  CHECK(ok.code == cli::kExitPass);
  // a tolerance nobody can meet turns into a verification failure
  const auto strict = invoke({"verify-convexity", "--model", "sphere-product", "--param", "n=2",
                              "--samples", "500", "--tol", "1e-9", "--out", (dir / "g").string()});
  CHECK(strict.code == cli::kExitFail);
  CHECK(read_json(dir / "g" / "report.json")["verdict"] == "fail");
}

TEST_CASE("report layout and artifacts") {
  const fs::path dir = scratch("report");
  const auto r = invoke({"trace-flow", "--model", "sphere", "--x0", "0.6,0.8,0", "--t-end", "1",
                         "--plot", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitPass);
  const json rep = read_json(dir / "report.json");
  for (const char* key : {"model", "operation", "params", "seed", "tolerance", "verdict", "warnings",
                          "metrics", "artifacts", "generated_at"})
    CHECK(rep.contains(key));
  CHECK(rep["operation"] == "trace-flow");
  CHECK(rep["verdict"] == "pass");
  CHECK(fs::exists(dir / "trajectory.csv"));
  CHECK(fs::exists(dir / "trajectory.svg"));
  CHECK(fs::exists(dir / "config.json"));
  // the saved config replays to the same report
  const fs::path replay = scratch("replay");
  auto cfg = cli::load_config((dir / "config.json").string());
  cfg.out_dir = replay.string();
  std::ostringstream o, e;
  CHECK(cli::execute(cfg, o, e) == cli::kExitPass);
  std::ifstream a(dir / "report.json"), b(replay / "report.json");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  CHECK(cli::strip_timestamp(sa.str()) == cli::strip_timestamp(sb.str()));
}

TEST_CASE("config file plus overriding flags") {
  const fs::path dir = scratch("override");
  cli::ExperimentConfig c;
  c.command = "verify-convexity";
  c.model = "sphere";
  c.samples = 300;
  c.seed = 5;
  cli::save_config(c, (dir / "c.json").string());
  const auto r = invoke({"verify-convexity", "--config", (dir / "c.json").string(), "--seed", "9",
                         "--out", (dir / "out").string()});
  CHECK(r.code == cli::kExitPass);
  const auto rep = read_json(dir / "out" / "report.json");
  CHECK(rep["seed"] == 9);
  CHECK(cli::load_config((dir / "out" / "config.json").string()).samples == 300);
  std::ofstream(dir / "bad.json") << R"({"command": "verify-convexity", "colour": "red"})";
  CHECK(invoke({"verify-convexity", "--config", (dir / "bad.json").string()}).code == cli::kExitUsage);
}

TEST_CASE("strip_timestamp") {
  const std::string a = R"({"verdict": "pass", "generated_at": "2026-01-01T00:00:00Z"})";
  const std::string b = R"({"verdict": "pass", "generated_at": "2027-05-05T12:00:00Z"})";
  CHECK(cli::strip_timestamp(a) == cli::strip_timestamp(b));
  CHECK(cli::strip_timestamp(a).find("generated_at") == std::string::npos);
  CHECK(cli::strip_timestamp("not json") == "not json");
}
