#include "momentlab_cli/cli.hpp"

#include "svg.hpp"

#include "momentlab/convexity.hpp"
#include "momentlab/error.hpp"
#include "momentlab/flow.hpp"
#include "momentlab/hull.hpp"
#include "momentlab/loop_experiment.hpp"
#include "momentlab/models.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>

namespace cli {

using nlohmann::json;
using momentlab::Mat;
using momentlab::ModelPtr;
using momentlab::Vec;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  double tolerance = 0.0;
  json params = json::object();   // resolved command options
  json metrics = json::object();
  std::vector<std::string> artifacts;
  std::vector<std::string> warnings;
};

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json vecs_json(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec_json(v));
  return a;
}

std::ofstream open_csv(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << std::setprecision(17);
  return out;
}

void write_points_csv(const fs::path& p, const std::vector<Vec>& pts, const std::string& prefix) {
  auto out = open_csv(p);
  const auto n = pts.empty() ? 0 : pts.front().size();
  for (Eigen::Index i = 0; i < n; ++i) out << (i ? "," : "") << prefix << (i + 1);
  out << '\n';
  for (const auto& v : pts) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << v(i);
    out << '\n';
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ModelPtr make_model(const ExperimentConfig& c) {
  try {
    return momentlab::registry_get(c.model, c.params);
  } catch (const momentlab::Error& e) {
    throw ConfigError(e.what());
  }
}

void forbid(bool present, const std::string& flag, const std::string& command) {
  if (present) throw ConfigError(flag + " is not used by " + command);
}

void require_positive(const std::optional<int>& v, const std::string& what) {
  if (v && *v <= 0) throw ConfigError(what + " must be positive");
}

// 2-D view of a momentum cloud: first two coordinates, or (value, rank) in 1-D.
std::vector<Eigen::Vector2d> plane_view(const std::vector<Vec>& pts) {
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec& v = pts[i];
    if (v.size() >= 2)
      out.emplace_back(v(0), v(1));
    else
      out.emplace_back(v(0), pts.size() > 1 ? double(i) / double(pts.size() - 1) : 0.0);
  }
  return out;
}

std::vector<Eigen::Vector2d> outline_of(const std::vector<Eigen::Vector2d>& pts) {
  std::vector<Vec> v;
  for (const auto& p : pts) v.push_back(p);
  if (v.size() < 3) return pts;
  const auto hull = momentlab::convex_hull(v);
  std::vector<Eigen::Vector2d> out;
  for (const auto& q : hull.vertices) out.emplace_back(q(0), q(1));
  return out;
}

// ---------------------------------------------------------------------------

Outcome verify_convexity_cmd(const ExperimentConfig& c, const fs::path& dir) {
  forbid(c.normalized, "--normalized", c.command);
  forbid(!c.x0.empty(), "--x0", c.command);
  require_positive(c.samples, "--samples");
  const ModelPtr model = make_model(c);
  const int samples = c.samples.value_or(100000);
  const double tol = c.tolerance.value_or(2e-2);
  if (!(tol >= 0)) throw ConfigError("--tol must be nonnegative");
  constexpr int kPairTrials = 1000;

  Outcome o;
  o.tolerance = tol;
  o.params = {{"samples", samples}};
  const int n = model->action_dim();
  std::vector<Vec> fixed;
  if (model->has_fixed_points())
    for (const auto& r : model->fixed_points()) fixed.push_back(r.mu_image);

  momentlab::ConvexityReport rep;
  const bool hull_mode = model->compact() && !fixed.empty() && n <= 3;
  if (hull_mode) {
    rep = momentlab::verify_hull_equals_fixed_images(*model, samples, tol, c.seed);
    o.params["check"] = "hull-vs-fixed-images";
    o.metrics["max_sample_to_fixed_hull"] = rep.max_sample_to_fixed_hull;
    o.metrics["max_fixed_vertex_to_sample_hull"] = rep.max_fixed_vertex_to_sample_hull;
  } else {
    const auto cloud = momentlab::momentum_image_sample(*model, samples, c.seed);
    rep = momentlab::verify_convexity(cloud, kPairTrials, tol, c.seed,
                                      momentlab::ToleranceMode::cloud_relative, fixed);
    rep.fixed_images = fixed;
    if (n <= 3) rep.hull_vertices = momentlab::convex_hull(cloud).vertices;
    o.params["check"] = "midpoint";
    o.params["pair_trials"] = kPairTrials;
    o.metrics["midpoint_violations"] = rep.midpoint_violations;
    if (!model->compact())
      o.warnings.push_back("model is not compact; only midpoint convexity is tested");
  }
  o.pass = rep.pass;
  o.metrics["sample_count"] = rep.samples.size();
  o.metrics["max_outside_distance"] = rep.max_outside_distance;
  o.metrics["hull_vertex_count"] = rep.hull_vertices.size();
  o.metrics["hull_vertices"] = vecs_json(rep.hull_vertices);
  o.metrics["fixed_images"] = vecs_json(fixed);

  write_points_csv(dir / "momentum_samples.csv", rep.samples, "mu");
  write_points_csv(dir / "hull_vertices.csv", rep.hull_vertices, "mu");
  o.artifacts = {"momentum_samples.csv", "hull_vertices.csv"};
  if (c.plot) {
    Plot p;
    p.title = "momentum image: " + model->name();
    p.x_label = "mu1";
    p.y_label = n >= 2 ? "mu2" : "sample rank";
    p.points = plane_view(rep.samples);
    for (const auto& f : fixed) p.markers.emplace_back(f(0), n >= 2 ? f(1) : 0.5);
    if (n >= 2) {
      p.outline = outline_of(plane_view(rep.hull_vertices));
      p.close_outline = true;
    }
    write_svg((dir / "momentum.svg").string(), p);
    o.artifacts.push_back("momentum.svg");
  }
  return o;
}

// ---------------------------------------------------------------------------

std::vector<Vec> level_grid(const momentlab::ManifoldModel& model, int per_axis,
                            std::uint64_t seed) {
  const int n = model.action_dim();
  Vec lo = Vec::Constant(n, INFINITY), hi = Vec::Constant(n, -INFINITY);
  bool periodic = model.circle_valued();
  if (periodic) {
    lo.setConstant(-1.0);
    hi.setConstant(1.0);
  } else {
    std::vector<Vec> ref;
    if (model.compact() && model.has_fixed_points())
      for (const auto& r : model.fixed_points()) ref.push_back(r.mu_image);
    else
      ref = momentlab::momentum_image_sample(model, 2000, seed);
    for (const auto& v : ref) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
  }
  // periodic axes skip the endpoint that wraps onto the start
  auto coord = [&](int j) {
    if (per_axis == 1) return 0.5;
    return periodic ? double(j) / per_axis : double(j) / (per_axis - 1);
  };
  std::vector<Vec> grid;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec v(n);
    for (int a = 0; a < n; ++a) v(a) = lo(a) + (hi(a) - lo(a)) * coord(idx[a]);
    grid.push_back(v);
    int a = 0;
    while (a < n && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == n) break;
  }
  return grid;
}

Outcome level_connectivity_cmd(const ExperimentConfig& c, const fs::path& dir) {
  forbid(c.normalized, "--normalized", c.command);
  forbid(!c.x0.empty(), "--x0", c.command);
  require_positive(c.samples, "--samples");
  require_positive(c.grid, "--grid");
  const ModelPtr model = make_model(c);
  const int n = model->action_dim();
  const int per_axis = c.grid.value_or(n == 1 ? 9 : 5);
  const int samples = c.samples.value_or(200);
  if (c.tolerance && !(*c.tolerance > 0)) throw ConfigError("--tol (linking radius) must be positive");
  const auto grid = level_grid(*model, per_axis, c.seed);

  const auto scan = momentlab::level_connectivity_scan(*model, grid, samples, c.seed, c.tolerance);
  Outcome o;
  o.tolerance = c.tolerance.value_or(0.0);
  o.params = {{"grid", per_axis}, {"samples_per_level", samples},
              {"linking_radius", c.tolerance ? json(*c.tolerance) : json("auto")}};
  json levels = json::array();
  int singular_disconnected = 0, empty = 0;
  auto out = open_csv(dir / "levels.csv");
  for (int a = 0; a < n; ++a) out << "c" << (a + 1) << ',';
  out << "kind,components,points,epsilon,failure_fraction\n";
  for (const auto& lv : scan.levels) {
    const std::string kind = momentlab::to_string(lv.kind);
    levels.push_back({{"value", vec_json(lv.value)},
                      {"kind", kind},
                      {"components", lv.component_count},
                      {"points", lv.point_count},
                      {"epsilon", lv.epsilon},
                      {"failure_fraction", lv.failure_fraction},
                      {"high_failure", lv.high_failure}});
    for (int a = 0; a < n; ++a) out << lv.value(a) << ',';
    out << kind << ',' << lv.component_count << ',' << lv.point_count << ',' << lv.epsilon << ','
        << lv.failure_fraction << '\n';
    std::ostringstream at;
    at << std::setprecision(6) << lv.value.transpose();
    if (lv.kind == momentlab::LevelKind::singular && lv.component_count > 1) {
      ++singular_disconnected;
      o.warnings.push_back("singular level " + at.str() + " has " +
                           std::to_string(lv.component_count) + " components");
    }
    if (lv.kind == momentlab::LevelKind::empty) ++empty;
    if (lv.high_failure) o.warnings.push_back("level " + at.str() + ": most projections failed");
    if (lv.kind == momentlab::LevelKind::regular && lv.component_count != 1) o.pass = false;
  }
  o.metrics = {{"levels", levels},
               {"regular_levels", scan.regular_levels},
               {"regular_connected", scan.regular_connected},
               {"regular_connected_fraction", scan.regular_connected_fraction()},
               {"singular_disconnected", singular_disconnected},
               {"empty_levels", empty}};
  o.artifacts = {"levels.csv"};
  if (c.plot && n == 1) {
    Plot p;
    p.title = "level components: " + model->name();
    p.x_label = "level value";
    p.y_label = "components";
    for (const auto& lv : scan.levels) {
      const Eigen::Vector2d q(lv.value(0), lv.component_count);
      (lv.kind == momentlab::LevelKind::regular ? p.points : p.markers).push_back(q);
    }
    write_svg((dir / "levels.svg").string(), p);
    o.artifacts.push_back("levels.svg");
  }
  return o;
}

// ---------------------------------------------------------------------------

Vec resolve_xi(const ExperimentConfig& c, const momentlab::ManifoldModel& model) {
  const int n = model.action_dim();
  if (c.xi.empty()) return Vec::Ones(n);
  if (static_cast<int>(c.xi.size()) != n)
    throw ConfigError("--xi needs " + std::to_string(n) + " components");
  return Eigen::Map<const Vec>(c.xi.data(), n);
}

Outcome trace_flow_cmd(const ExperimentConfig& c, const fs::path& dir) {
  forbid(c.samples.has_value(), "--samples", c.command);
  forbid(c.grid.has_value(), "--grid", c.command);
  const ModelPtr model = make_model(c);
  const Vec xi = resolve_xi(c, *model);
  const double t_end = c.t_end.value_or(2.0);
  const double step = c.step.value_or(1e-2);
  if (!(t_end >= 0)) throw ConfigError("--t-end must be nonnegative");
  if (!(step > 0)) throw ConfigError("--step must be positive");
  const double tol = c.tolerance.value_or(c.normalized ? 1e-10 : 1e-8);
  if (!(tol > 0)) throw ConfigError("--tol must be positive");

  Vec x0;
  if (c.x0.empty()) {
    std::mt19937_64 rng(c.seed);
    x0 = model->propose(rng);
  } else {
    if (static_cast<int>(c.x0.size()) != model->ambient_dim())
      throw ConfigError("--x0 needs " + std::to_string(model->ambient_dim()) + " coordinates");
    x0 = Eigen::Map<const Vec>(c.x0.data(), model->ambient_dim());
  }
  try {
    x0 = model->project(x0);
  } catch (const momentlab::Error& e) {
    throw ConfigError(std::string("start point is off the manifold after projection: ") + e.what());
  }
  const auto f = momentlab::momentum_component(model, xi);

  momentlab::FlowTrajectory tr;
  if (c.normalized) {
    momentlab::NormalizedFlowOptions opt;
    opt.local_tol = tol;
    if (momentlab::manifold_gradient(*model, f, x0).norm() < opt.delta)
      throw ConfigError("normalized flow cannot start at a critical point");
    tr = momentlab::normalized_flow(*model, f, x0, t_end, step, opt);
  } else {
    momentlab::FlowOptions opt;
    opt.convergence_tol = tol;
    tr = momentlab::integrate_flow(*model, f, x0, t_end, step, opt);
  }

  Outcome o;
  o.tolerance = tol;
  o.params = {{"flow", c.normalized ? "normalized" : "gradient"},
              {"xi", vec_json(xi)},
              {"x0", vec_json(x0)},
              {"t_end", t_end},
              {"step", step}};
  o.pass = tr.status != momentlab::FlowStatus::step_failure;
  o.metrics = {{"status", momentlab::to_string(tr.status)},
               {"points", tr.points.size()},
               {"final_time", tr.times.back()},
               {"final_point", vec_json(tr.last())},
               {"initial_f", tr.f_values.front()},
               {"final_f", tr.f_values.back()},
               {"final_grad_norm", tr.final_grad_norm()}};
  if (c.normalized) {
    double e = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      e = std::max(e, std::abs(tr.f_values[k] - (tr.f_values.front() - tr.times[k])) / (1.0 + tr.times[k]));
    o.metrics["max_unit_rate_error"] = e;
  }
  if (model->name() == "morse-chart" && !c.normalized) {
    // x+ e^{-2 s t}, x- e^{2 s t} for f = s (|x+|^2 - |x-|^2)
    const auto it = model->params().find("d_plus");
    const int dp = it == model->params().end() ? 1 : static_cast<int>(it->second);
    double e = 0.0;
    for (std::size_t k = 0; k < tr.times.size(); ++k)
      for (Eigen::Index i = 0; i < x0.size(); ++i) {
        const double rate = (i < dp ? -2.0 : 2.0) * xi(0);
        e = std::max(e, std::abs(tr.points[k](i) - x0(i) * std::exp(rate * tr.times[k])));
      }
    o.metrics["closed_form_sup_error"] = e;
  }
  if (model->has_fixed_points()) {
    double best = INFINITY;
    for (const auto& r : model->fixed_points()) best = std::min(best, (r.point - tr.last()).norm());
    o.metrics["distance_to_nearest_fixed_point"] = best;
  }
  {
    std::ofstream out(dir / "trajectory.csv");
    if (!out) throw std::runtime_error("cannot write trajectory.csv");
    momentlab::write_trajectory_csv(out, tr);
  }
  o.artifacts = {"trajectory.csv"};
  if (c.plot && model->ambient_dim() >= 2) {
    Plot p;
    p.title = "flow line: " + model->name();
    p.x_label = "x1";
    p.y_label = "x2";
    for (const auto& x : tr.points) p.outline.emplace_back(x(0), x(1));
    p.markers.emplace_back(tr.points.front()(0), tr.points.front()(1));
    p.markers.emplace_back(tr.last()(0), tr.last()(1));
    write_svg((dir / "trajectory.svg").string(), p);
    o.artifacts.push_back("trajectory.svg");
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome loopgroup_cmd(const ExperimentConfig& c, const fs::path& dir) {
  forbid(c.normalized, "--normalized", c.command);
  forbid(!c.x0.empty(), "--x0", c.command);
  if (!c.model.empty() && c.model != "loop-group")
    throw ConfigError("loopgroup runs the loop-group experiment; --model must be loop-group");
  static const std::set<std::string> keys = {"K", "sigma", "pair_trials"};
  for (const auto& [k, v] : c.params)
    if (!keys.count(k)) throw ConfigError("unknown loopgroup parameter '" + k + "' (K, sigma, pair_trials)");
  auto int_param = [&](const std::string& k, int def) {
    const auto it = c.params.find(k);
    if (it == c.params.end()) return def;
    if (std::floor(it->second) != it->second || std::abs(it->second) > 1e9)
      throw ConfigError("parameter " + k + " must be an integer");
    return static_cast<int>(it->second);
  };
  const int K = int_param("K", 3);
  if (K < 1) throw ConfigError("K must be at least 1");
  momentlab::loop::LoopExperimentOptions opt;
  opt.grid_n = c.grid.value_or(512);
  opt.sigma = c.params.count("sigma") ? c.params.at("sigma") : 0.5;
  opt.pair_trials = int_param("pair_trials", 1000);
  opt.midpoint_tolerance = c.tolerance.value_or(1e-3);
  if (opt.grid_n < 8 * K) throw ConfigError("--grid must be at least 8 K");
  if (!(opt.sigma >= 0)) throw ConfigError("sigma must be nonnegative");
  if (opt.pair_trials < 0) throw ConfigError("pair_trials must be nonnegative");
  if (!(opt.midpoint_tolerance >= 0)) throw ConfigError("--tol must be nonnegative");
  const int samples = c.samples.value_or(10000);
  if (samples < 0) throw ConfigError("--samples must be nonnegative");

  const auto rep = momentlab::loop::loop_momentum_experiment(K, samples, c.seed, opt);
  Outcome o;
  o.tolerance = opt.midpoint_tolerance;
  o.params = {{"K", K}, {"grid_n", opt.grid_n}, {"sigma", opt.sigma},
              {"pair_trials", opt.pair_trials}, {"samples", samples}};
  o.pass = rep.pass;
  json fixed = json::array();
  for (const auto& q : rep.fixed_images) fixed.push_back({q(0), q(1)});
  double pmin = INFINITY, pmax = -INFINITY, emax = -INFINITY;
  for (const auto& q : rep.points) {
    pmin = std::min(pmin, q(0));
    pmax = std::max(pmax, q(0));
    emax = std::max(emax, q(1));
  }
  o.metrics = {{"fixed_images", fixed},
               {"sample_count", rep.points.size()},
               {"min_energy", rep.min_energy},
               {"min_cs_margin", rep.min_cs_margin},
               {"envelope_tolerance", rep.envelope_tolerance},
               {"min_envelope_margin", rep.min_envelope_margin},
               {"envelope_violations", rep.envelope_violations},
               {"midpoint_violations", rep.convexity.midpoint_violations},
               {"max_midpoint_excess", rep.convexity.max_outside_distance}};
  if (!rep.points.empty()) {
    o.metrics["p_range"] = {pmin, pmax};
    o.metrics["max_energy"] = emax;
  }
  {
    auto out = open_csv(dir / "momentum_image.csv");
    out << "p,E,loop_id,kind\n";
    for (std::size_t i = 0; i < rep.points.size(); ++i)
      out << rep.points[i](0) << ',' << rep.points[i](1) << ',' << i << ",sample\n";
    for (int k = -K; k <= K; ++k) {
      const auto& q = rep.fixed_images[static_cast<std::size_t>(k + K)];
      out << q(0) << ',' << q(1) << ",gamma_" << k << ",fixed\n";
    }
  }
  {
    // the fixed loops gamma_k themselves
    auto out = open_csv(dir / "fixed_loops.csv");
    out << "k,";
    bool header = true;
    for (const auto& f : momentlab::loop::fixed_point_loops(K, opt.grid_n)) {
      std::ostringstream one;
      momentlab::loop::write_loop_csv(one, f.loop);
      std::istringstream lines(one.str());
      std::string line;
      std::getline(lines, line);
      if (header) out << line << '\n', header = false;
      while (std::getline(lines, line)) out << f.k << ',' << line << '\n';
    }
  }
  o.artifacts = {"momentum_image.csv", "fixed_loops.csv"};
  if (c.plot) {
    Plot p;
    p.title = "loop momentum image (p, E), K = " + std::to_string(K);
    p.x_label = "p";
    p.y_label = "E";
    for (const auto& q : rep.points) p.points.emplace_back(q);
    for (const auto& q : rep.fixed_images) {
      p.markers.emplace_back(q);
      p.outline.emplace_back(q);
    }
    write_svg((dir / "momentum_image.svg").string(), p);
    o.artifacts.push_back("momentum_image.svg");
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome even_index_cmd(const ExperimentConfig& c, const fs::path& dir) {
  forbid(c.normalized, "--normalized", c.command);
  forbid(!c.x0.empty(), "--x0", c.command);
  forbid(c.tolerance.has_value(), "--tol", c.command);
  forbid(c.grid.has_value(), "--grid", c.command);
  require_positive(c.samples, "--samples");
  const ModelPtr model = make_model(c);
  if (!model->has_action()) throw ConfigError("model '" + model->name() + "' carries no torus action");
  if (!model->has_fixed_points()) throw ConfigError("model '" + model->name() + "' has no fixed points");
  const int n = model->action_dim();

  std::vector<Vec> draws;
  int redraws = 0;
  std::vector<momentlab::EvenIndexReport> reports;
  if (!c.xi.empty()) {
    const Vec xi = resolve_xi(c, *model);
    try {
      reports.push_back(momentlab::even_index_audit(*model, xi));
    } catch (const momentlab::DegenerateError& e) {
      throw ConfigError(std::string("xi rejected: ") + e.what());
    }
    draws.push_back(xi);
  } else {
    const int count = c.samples.value_or(20);
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> normal;
    while (static_cast<int>(draws.size()) < count) {
      Vec xi(n);
      for (int a = 0; a < n; ++a) xi(a) = normal(rng);
      try {
        reports.push_back(momentlab::even_index_audit(*model, xi));
        draws.push_back(xi);
      } catch (const momentlab::DegenerateError&) {
        if (++redraws > 100 * count) throw std::runtime_error("too many degenerate xi draws");
      }
    }
  }

  Outcome o;
  o.tolerance = 1e-8;
  o.params = {{"draws", draws.size()},
              {"xi", c.xi.empty() ? json("random normal") : vec_json(draws.front())},
              {"degeneracy_tolerance", "1e-8 relative to the largest eigenvalue"}};
  int odd = 0, one = 0;
  std::set<int> indices;
  json audits = json::array();
  auto out = open_csv(dir / "fixed_points.csv");
  out << "draw,fixed_point";
  for (int a = 0; a < n; ++a) out << ",mu" << (a + 1);
  out << ",index,coindex\n";
  for (std::size_t d = 0; d < reports.size(); ++d) {
    json idx = json::array(), co = json::array();
    for (std::size_t k = 0; k < reports[d].entries.size(); ++k) {
      const auto& e = reports[d].entries[k];
      idx.push_back(e.index);
      co.push_back(e.coindex);
      indices.insert(e.index);
      if (!e.even) ++odd;
      out << d << ',' << k;
      for (int a = 0; a < n; ++a) out << ',' << e.mu_image(a);
      out << ',' << e.index << ',' << e.coindex << '\n';
    }
    one += reports[d].index_or_coindex_one;
    audits.push_back({{"xi", vec_json(draws[d])}, {"index", idx}, {"coindex", co}});
  }
  o.pass = odd == 0;
  o.metrics = {{"audits", audits},
               {"fixed_points_per_audit", reports.front().entries.size()},
               {"redraws", redraws},
               {"odd_count", odd},
               {"index_or_coindex_one", one},
               {"observed_indices", std::vector<int>(indices.begin(), indices.end())}};
  o.artifacts = {"fixed_points.csv"};
  if (c.plot) {
    Plot p;
    p.title = "fixed-point images: " + model->name();
    p.x_label = "mu1";
    p.y_label = n >= 2 ? "mu2" : "index";
    for (const auto& e : reports.front().entries)
      p.markers.emplace_back(e.mu_image(0), n >= 2 ? e.mu_image(1) : double(e.index));
    write_svg((dir / "fixed_points.svg").string(), p);
    o.artifacts.push_back("fixed_points.svg");
  }
  return o;
}

std::string default_model(const std::string& command) {
  if (command == "trace-flow") return "morse-chart";
  if (command == "loopgroup") return "loop-group";
  return "sphere";
}

}  // namespace

int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  ExperimentConfig c = config;
  if (c.model.empty()) c.model = default_model(c.command);
  const fs::path dir(c.out_dir);
  Outcome o;
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + c.out_dir + "': " + ec.message());
    if (c.command == "verify-convexity") o = verify_convexity_cmd(c, dir);
    else if (c.command == "level-connectivity") o = level_connectivity_cmd(c, dir);
    else if (c.command == "trace-flow") o = trace_flow_cmd(c, dir);
    else if (c.command == "loopgroup") o = loopgroup_cmd(c, dir);
    else if (c.command == "even-index") o = even_index_cmd(c, dir);
    else throw ConfigError("unknown command '" + c.command + "'");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << c.command << " failed: " << e.what() << '\n';
    return kExitFail;
  }

  save_config(c, (dir / "config.json").string());
  o.artifacts.insert(o.artifacts.begin(), "config.json");
  json model = {{"name", c.model}, {"params", json::object()}};
  for (const auto& [k, v] : c.params) model["params"][k] = v;
  json report = {{"model", model},
                 {"operation", c.command},
                 {"params", o.params},
                 {"seed", c.seed},
                 {"tolerance", o.tolerance},
                 {"verdict", o.pass ? "pass" : "fail"},
                 {"warnings", o.warnings},
                 {"metrics", o.metrics},
                 {"artifacts", o.artifacts},
                 {"generated_at", utc_now()}};
  {
    std::ofstream f(dir / "report.json");
    if (!f) {
      err << "error: cannot write report.json\n";
      return kExitFail;
    }
    f << report.dump(2) << '\n';
  }
  for (const auto& w : o.warnings) err << "warning: " << w << '\n';
  out << c.command << ": " << (o.pass ? "pass" : "fail") << " (report: "
      << (dir / "report.json").string() << ")\n";
  return o.pass ? kExitPass : kExitFail;
}

}  // namespace cli
