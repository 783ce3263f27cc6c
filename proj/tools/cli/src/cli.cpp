#include "momentlab_cli/cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <ostream>

namespace cli {

namespace {

struct RawOptions {
  std::string model;
  std::string model_file;
  std::vector<std::string> params;
  int samples = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int grid = 0;
  std::string out;
  bool plot = false;
  bool normalized = false;
  std::string config;
  std::string x0;
  std::string xi;
  double t_end = 0.0;
  double step = 0.0;
};

struct Bound {
  CLI::App* app = nullptr;
  CLI::Option* model;
  CLI::Option* model_file;
  CLI::Option* params;
  CLI::Option* samples;
  CLI::Option* seed;
  CLI::Option* tol;
  CLI::Option* grid;
  CLI::Option* out;
  CLI::Option* plot;
  CLI::Option* normalized;
  CLI::Option* config;
  CLI::Option* x0;
  CLI::Option* xi;
  CLI::Option* t_end;
  CLI::Option* step;
};

Bound bind(CLI::App* app, RawOptions& r) {
  Bound b;
  b.app = app;
  b.model = app->add_option("--model", r.model, "registry model name");
  b.model_file = app->add_option("--model-file", r.model_file, "JSON model definition {name, params}");
  b.params = app->add_option("--param", r.params, "model or command parameter key=value (repeatable)");
  b.samples = app->add_option("--samples", r.samples, "sample count");
  b.seed = app->add_option("--seed", r.seed, "random seed");
  b.tol = app->add_option("--tol", r.tol, "verification tolerance");
  b.grid = app->add_option("--grid", r.grid, "grid size");
  b.out = app->add_option("--out", r.out, "output directory");
  b.plot = app->add_flag("--plot", r.plot, "write SVG plots");
  b.normalized = app->add_flag("--normalized", r.normalized, "unit descent speed flow");
  b.config = app->add_option("--config", r.config, "JSON experiment config");
  b.x0 = app->add_option("--x0", r.x0, "start point, comma separated");
  b.xi = app->add_option("--xi", r.xi, "direction xi, comma separated");
  b.t_end = app->add_option("--t-end", r.t_end, "flow time");
  b.step = app->add_option("--step", r.step, "flow step");
  return b;
}

ExperimentConfig resolve(const Bound& b, const RawOptions& r, const std::string& command) {
  ExperimentConfig c;
  if (b.config->count()) {
    c = load_config(r.config);
    if (!c.command.empty() && !command.empty() && c.command != command)
      throw ConfigError("config file is for '" + c.command + "', not '" + command + "'");
  }
  if (!command.empty()) c.command = command;
  if (c.command.empty()) throw ConfigError("no command given");
  if (b.model_file->count()) {
    if (b.model->count()) throw ConfigError("--model and --model-file are exclusive");
    const ModelSpec m = load_model_spec(r.model_file);
    c.model = m.name;
    c.params = m.params;
  }
  if (b.model->count()) c.model = r.model;
  for (const auto& kv : r.params) {
    const auto [k, v] = parse_param(kv);
    c.params[k] = v;
  }
  if (b.samples->count()) c.samples = r.samples;
  if (b.seed->count()) c.seed = r.seed;
  if (b.tol->count()) c.tolerance = r.tol;
  if (b.grid->count()) c.grid = r.grid;
  if (b.out->count()) c.out_dir = r.out;
  if (b.plot->count()) c.plot = true;
  if (b.normalized->count()) c.normalized = true;
  if (b.x0->count()) c.x0 = parse_vector(r.x0);
  if (b.xi->count()) c.xi = parse_vector(r.xi);
  if (b.t_end->count()) c.t_end = r.t_end;
  if (b.step->count()) c.step = r.step;
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"momentlab: momentum map convexity, gradient flows and loop-group experiments",
               "momentlab"};
  app.require_subcommand(0, 1);
  RawOptions top_raw;
  Bound top;
  top.app = &app;
  top.config = app.add_option("--config", top_raw.config, "JSON experiment config (command taken from it)");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify-convexity", "sample mu and compare its hull with the fixed-point images"},
      {"level-connectivity", "count components of level sets on a grid of values"},
      {"trace-flow", "integrate the gradient flow of mu^xi and dump the trajectory"},
      {"loopgroup", "momentum image (p, E) of random truncated loops"},
      {"even-index", "Hessian index and coindex of mu^xi at the fixed points"}};
  std::vector<RawOptions> raws(commands.size());
  std::vector<Bound> bounds;
  for (std::size_t i = 0; i < commands.size(); ++i)
    bounds.push_back(bind(app.add_subcommand(commands[i].first, commands[i].second), raws[i]));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    ExperimentConfig c;
    bool found = false;
    for (std::size_t i = 0; i < bounds.size(); ++i)
      if (bounds[i].app->parsed()) {
        c = resolve(bounds[i], raws[i], commands[i].first);
        found = true;
      }
    if (!found) {
      if (!top.config->count()) {
        err << "error: a command or --config is required\n\n" << app.help();
        return kExitUsage;
      }
      c = load_config(top_raw.config);
      if (c.command.empty()) throw ConfigError("config file names no command");
    }
    return execute(c, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cli
