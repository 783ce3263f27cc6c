#include "momentlab_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cli {

using nlohmann::json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-convexity", "level-connectivity",
                                                 "trace-flow", "loopgroup", "even-index"};
  return names;
}

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

double get_real(const json& v, const std::string& key) {
  require(v.is_number(), "config key '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  require(v.is_number_integer(), "config key '" + key + "' must be an integer");
  const auto x = v.get<long long>();
  require(x >= 0 && x <= 1'000'000'000, "config key '" + key + "' is out of range");
  return static_cast<int>(x);
}

std::vector<double> get_reals(const json& v, const std::string& key) {
  require(v.is_array(), "config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(get_real(e, key));
  return out;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = c.command;
  j["model"] = c.model;
  j["params"] = json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  j["seed"] = c.seed;
  j["tolerance"] = opt(c.tolerance);
  j["samples"] = opt(c.samples);
  j["grid"] = opt(c.grid);
  j["out_dir"] = c.out_dir;
  j["plot"] = c.plot;
  j["normalized"] = c.normalized;
  j["x0"] = c.x0;
  j["xi"] = c.xi;
  j["t_end"] = opt(c.t_end);
  j["step"] = opt(c.step);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  require(j.is_object(), "config must be a JSON object");
  static const std::set<std::string> known = {"command", "model",  "params", "seed",
                                              "tolerance", "samples", "grid", "out_dir",
                                              "plot",   "normalized", "x0",  "xi",
                                              "t_end",  "step"};
  for (const auto& item : j.items())
    require(known.count(item.key()), "unknown config key '" + item.key() + "'");

  ExperimentConfig c;
  auto has = [&](const char* k) { return j.contains(k) && !j.at(k).is_null(); };
  if (has("command")) {
    require(j["command"].is_string(), "config key 'command' must be a string");
    c.command = j["command"].get<std::string>();
    const auto& names = command_names();
    require(std::find(names.begin(), names.end(), c.command) != names.end(),
            "unknown command '" + c.command + "'");
  }
  if (has("model")) {
    require(j["model"].is_string(), "config key 'model' must be a string");
    c.model = j["model"].get<std::string>();
  }
  if (has("params")) {
    require(j["params"].is_object(), "config key 'params' must be an object");
    for (const auto& item : j["params"].items())
      c.params[item.key()] = get_real(item.value(), "params." + item.key());
  }
  if (has("seed")) {
    require(j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0),
            "config key 'seed' must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (has("tolerance")) c.tolerance = get_real(j["tolerance"], "tolerance");
  if (has("samples")) c.samples = get_int(j["samples"], "samples");
  if (has("grid")) c.grid = get_int(j["grid"], "grid");
  if (has("out_dir")) {
    require(j["out_dir"].is_string(), "config key 'out_dir' must be a string");
    c.out_dir = j["out_dir"].get<std::string>();
  }
  if (has("plot")) {
    require(j["plot"].is_boolean(), "config key 'plot' must be a boolean");
    c.plot = j["plot"].get<bool>();
  }
  if (has("normalized")) {
    require(j["normalized"].is_boolean(), "config key 'normalized' must be a boolean");
    c.normalized = j["normalized"].get<bool>();
  }
  if (has("x0")) c.x0 = get_reals(j["x0"], "x0");
  if (has("xi")) c.xi = get_reals(j["xi"], "xi");
  if (has("t_end")) c.t_end = get_real(j["t_end"], "t_end");
  if (has("step")) c.step = get_real(j["step"], "step");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << to_json(c).dump(2) << '\n';
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("model file '" + path + "' is not valid JSON: " + e.what());
  }
  require(j.is_object(), "model file must hold a JSON object");
  for (const auto& item : j.items())
    require(item.key() == "name" || item.key() == "params",
            "unknown model file key '" + item.key() + "'");
  require(j.contains("name") && j["name"].is_string(), "model file needs a string 'name'");
  ModelSpec m;
  m.name = j["name"].get<std::string>();
  if (j.contains("params")) {
    require(j["params"].is_object(), "model file 'params' must be an object");
    for (const auto& item : j["params"].items())
      m.params[item.key()] = get_real(item.value(), "params." + item.key());
  }
  return m;
}

std::pair<std::string, double> parse_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size())
    throw ConfigError("--param expects key=value, got '" + kv + "'");
  const std::string key = kv.substr(0, eq);
  const std::string val = kv.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(val, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != val.size() || !std::isfinite(v))
    throw ConfigError("--param " + key + ": '" + val + "' is not a number");
  return {key, v};
}

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size() || !std::isfinite(v))
      throw ConfigError("'" + text + "' is not a comma separated list of numbers");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty vector");
  return out;
}

std::string strip_timestamp(const std::string& report_text) {
  json j;
  try {
    j = json::parse(report_text);
  } catch (const json::parse_error&) {
    return report_text;
  }
  if (j.is_object()) j.erase("generated_at");
  return j.dump(2);
}

}  // namespace cli
