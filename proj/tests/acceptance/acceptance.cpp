// One line per acceptance criterion: PASS/FAIL, the measured quantity, runtime.

#include "momentlab/blended_metric.hpp"
#include "momentlab/convexity.hpp"
#include "momentlab/error.hpp"
#include "momentlab/flow.hpp"
#include "momentlab/loop_experiment.hpp"
#include "momentlab/loop_group.hpp"
#include "momentlab/models.hpp"
#include "momentlab/rational.hpp"
#include "momentlab/symplectic.hpp"

#ifdef MOMENTLAB_HAVE_CLI
#include "momentlab_cli/cli.hpp"
#endif

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace momentlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = o.pass && secs < limit_s;
  if (!ok) ++failures;
  std::printf("[%s] %2d %-34s %s | %.2fs (limit %.0fs)\n", ok ? "PASS" : "FAIL", id,
              title.c_str(), o.detail.c_str(), secs, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome closed_form_flow() {
  const auto model = registry_get("morse-chart", {{"d_plus", 1}, {"d_minus", 1}});
  const auto f = momentum_component(model, Vec::Ones(1));
  const FlowTrajectory tr = integrate_flow(*model, f, Eigen::Vector2d(1, 1), 2.0, 1e-2);
  double err = 0.0;
  for (std::size_t k = 0; k < tr.points.size(); ++k) {
    const double t = tr.times[k];
    err = std::max(err, std::abs(tr.points[k](0) - std::exp(-2 * t)));
    err = std::max(err, std::abs(tr.points[k](1) - std::exp(2 * t)));
  }
  const bool reached = std::abs(tr.times.back() - 2.0) < 1e-12;
  return {reached && err <= 1e-6, fmt("sup error %.2e over t in [0,2] (<= 1e-6)", err)};
}

Outcome normalized_descent() {
  double worst = 0.0;
  int starts = 0;
  for (const auto& [name, params] :
       std::vector<std::pair<std::string, ParamList>>{{"morse-chart", {{"d_plus", 2}, {"d_minus", 1}}},
                                                      {"sphere", {}}}) {
    const auto model = registry_get(name, params);
    const auto f = momentum_component(model, Vec::Ones(1));
    std::mt19937_64 rng(11);
    int done = 0;
    while (done < 100) {
      const Vec x0 = model->project(model->propose(rng));
      if (manifold_gradient(*model, f, x0).norm() < 1e-2) continue;
      const double f0 = f.value(x0);
      const FlowTrajectory tr = normalized_flow(*model, f, x0, 1.0, 1e-2);
      for (std::size_t k = 0; k < tr.points.size(); ++k) {
        const double t = tr.times[k];
        worst = std::max(worst, std::abs(tr.f_values[k] - (f0 - t)) / (1.0 + t));
      }
      ++done;
      ++starts;
    }
  }
  return {worst <= 1e-6,
          fmt("max |f - (f0 - t)| / (1 + t) = %.2e over ", worst) + std::to_string(starts) +
              " starts (<= 1e-6)"};
}

Outcome ags_desk_scale() {
  const auto sphere = registry_get("sphere");
  const auto r1 = verify_hull_equals_fixed_images(*sphere, 10000, 1e-2, 1);
  const auto sp2 = registry_get("sphere-product", {{"n", 2}});
  const auto r2 = verify_hull_equals_fixed_images(*sp2, 10000, 2e-2, 1);
  std::ostringstream d;
  d.precision(3);
  d << "sphere (a) " << r1.max_sample_to_fixed_hull << " (b) " << r1.max_fixed_vertex_to_sample_hull
    << " @1e-2; S2xS2 (a) " << r2.max_sample_to_fixed_hull << " (b) "
    << r2.max_fixed_vertex_to_sample_hull << " @2e-2";
  return {r1.pass && r2.pass, d.str()};
}

Outcome counterexample_detection() {
  const auto model = registry_get("height-circle-map");
  std::vector<Vec> grid;
  for (int j = 0; j < 9; ++j) grid.push_back(Vec::Constant(1, -1.0 + 2.0 * j / 9.0));
  const auto scan = level_connectivity_scan(*model, grid, 200, 5);
  bool ok = scan.levels[0].component_count == 2 && scan.levels[0].kind == LevelKind::singular;
  int regular_one = 0;
  for (std::size_t j = 1; j < scan.levels.size(); ++j)
    if (scan.levels[j].kind == LevelKind::regular && scan.levels[j].component_count == 1) ++regular_one;
  ok = ok && regular_one == 8;
  return {ok, "components at -1: " + std::to_string(scan.levels[0].component_count) + " (" +
                  to_string(scan.levels[0].kind) + "); regular levels with 1 component: " +
                  std::to_string(regular_one) + "/8"};
}

Outcome complex_structure_suite() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  double e_sq = 0, e_orth = 0, e_form = 0, min_pos = INFINITY;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 * (1 + trial % 6);
    Mat m(dim, dim), b(dim, dim);
    for (auto& v : m.reshaped()) v = normal(rng);
    for (auto& v : b.reshaped()) v = normal(rng);
    const Mat omega = m - m.transpose();
    const Mat metric = b * b.transpose() + 0.5 * Mat::Identity(dim, dim);
    const auto frame = build_frame(omega, metric);
    const Mat j = compatible_complex_structure(frame).j;
    e_sq = std::max(e_sq, max_abs(j * j + Mat::Identity(dim, dim)));
    e_orth = std::max(e_orth, max_abs(j.transpose() * metric * j - metric));
    for (int s = 0; s < 100; ++s) {
      Vec u(dim), v(dim);
      for (auto& x : u) x = normal(rng);
      for (auto& x : v) x = normal(rng);
      u.normalize();
      v.normalize();
      e_form = std::max(e_form, std::abs(frame.form(j * u, j * v) - frame.form(u, v)));
      min_pos = std::min(min_pos, frame.form(u, j * u));
    }
  }
  std::ostringstream d;
  d.precision(2);
  d << std::scientific << "J^2+I " << e_sq << ", J^TGJ-G " << e_orth << ", form " << e_form
    << ", min w(u,Ju) " << min_pos;
  return {e_sq <= 1e-9 && e_orth <= 1e-9 && e_form <= 1e-9 && min_pos > 0, d.str()};
}

Outcome even_index() {
  const std::vector<std::pair<std::string, ParamList>> models = {
      {"sphere", {}},
      {"sphere-product", {{"n", 2}}},
      {"sphere-product", {{"n", 3}}},
      {"height-circle-map", {}},
      {"morse-chart", {{"d_plus", 2}, {"d_minus", 2}}},
      {"morse-chart", {{"d_plus", 4}, {"d_minus", 2}}},
      {"loop-truncation", {{"K", 2}}},
  };
  int audits = 0, odd = 0, ones = 0, redraws = 0;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& [name, params] : models) {
    const auto model = registry_get(name, params);
    int done = 0;
    while (done < 20) {
      Vec xi(model->action_dim());
      for (auto& v : xi) v = normal(rng);
      try {
        const auto rep = even_index_audit(*model, xi);
        for (const auto& e : rep.entries) odd += e.even ? 0 : 1;
        ones += rep.index_or_coindex_one;
        ++done;
        ++audits;
      } catch (const DegenerateError&) {
        ++redraws;
      }
    }
  }
  return {odd == 0 && ones == 0, std::to_string(audits) + " audits over 7 models, odd " +
                                     std::to_string(odd) + ", index/coindex 1: " +
                                     std::to_string(ones) + ", redraws " + std::to_string(redraws)};
}

Outcome rational() {
  const auto a = rationally_independent(Eigen::Vector2d(3, std::sqrt(8.0)), 50);
  const auto b = rationally_independent(Eigen::Vector3d(3, std::sqrt(8.0), 1 + std::sqrt(2.0)), 50);
  bool ok = a.independent && !b.independent && b.residual < 1e-12;
  std::string w;
  if (!b.independent)
    w = std::to_string(b.witness(0)) + "," + std::to_string(b.witness(1)) + "," +
        std::to_string(b.witness(2));
  return {ok, std::string("(3,sqrt8) ") + (a.independent ? "independent" : "dependent") +
                  "; (3,sqrt8,1+sqrt2) witness (" + w + ") residual " + fmt("%.1e", b.residual)};
}

Outcome good_projection() {
  int runs = 0, max_trials = 0;
  double worst_kernel = 0, worst_perp = 0;
  bool ok = true;
  for (int dim : {2, 3}) {
    const Mat emb = Mat::Identity(dim, dim);
    const Vec h = Vec::Unit(dim, 0);
    for (int seed = 0; seed < 1000; ++seed) {
      const auto c = choose_good_projection(dim, emb, h, 100, static_cast<std::uint64_t>(seed));
      worst_kernel = std::max(worst_kernel, (c.matrix * c.kernel).cwiseAbs().maxCoeff());
      worst_perp = std::max(worst_perp, std::abs(c.theta.dot(c.kernel)));
      ok = ok && c.certificate.independent;
      max_trials = std::max(max_trials, c.trials_used);
      ++runs;
    }
  }
  ok = ok && worst_kernel <= 1e-12 && worst_perp <= 1e-12;
  std::ostringstream d;
  d.precision(2);
  d << runs << " runs, max trials " << max_trials << ", |Mp| " << worst_kernel << ", |<theta,p>| "
    << worst_perp;
  return {ok, d.str()};
}

Outcome loop_functionals() {
  double e_fixed = 0.0;
  for (int k = -5; k <= 5; ++k) {
    const auto l = loop::homomorphism_loop(k, 512);
    e_fixed = std::max(e_fixed, std::abs(loop::energy(l) - 0.5 * k * k));
    e_fixed = std::max(e_fixed, std::abs(loop::momentum_t(l) - k));
  }
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  double e_act = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto l = loop::loop_eval(loop::random_loop(3, 512, 0.5, rng));
    const Eigen::Vector2d m0 = loop::momentum_image(l);
    const Eigen::Vector2d mr = loop::momentum_image(loop::rotate_loop(angle(rng), l));
    const Eigen::Vector2d mc = loop::momentum_image(loop::conjugate_loop(angle(rng), l));
    e_act = std::max({e_act, (mr - m0).cwiseAbs().maxCoeff(), (mc - m0).cwiseAbs().maxCoeff()});
  }
  std::ostringstream d;
  d.precision(2);
  d << std::scientific << "fixed loops " << e_fixed << " (<= 1e-9), action invariance " << e_act
    << " (<= 1e-8)";
  return {e_fixed <= 1e-9 && e_act <= 1e-8, d.str()};
}

Outcome loop_convexity() {
  const auto rep = loop::loop_momentum_experiment(3, 10000, 3);
  std::ostringstream d;
  d.precision(2);
  d << "midpoint violations " << rep.convexity.midpoint_violations << "/" << rep.convexity.pair_trials
    << ", min CS margin " << rep.min_cs_margin << ", env tol " << rep.envelope_tolerance
    << ", min env margin " << rep.min_envelope_margin << ", env violations "
    << rep.envelope_violations;
  return {rep.pass && rep.points.size() == 10000, d.str()};
}

#ifdef MOMENTLAB_HAVE_CLI
std::string read_without_timestamp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return cli::strip_timestamp(ss.str());
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "momentlab_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> commands = {
      {"verify-convexity", "--model", "sphere-product", "--param", "n=2", "--samples", "2000", "--seed", "4"},
      {"level-connectivity", "--model", "height-circle-map", "--samples", "100", "--seed", "4"},
      {"trace-flow", "--model", "sphere", "--x0", "0.6,0.8,0", "--t-end", "2"},
      {"trace-flow", "--model", "sphere", "--x0", "0.6,0.8,0", "--t-end", "1", "--normalized"},
      {"loopgroup", "--param", "K=2", "--samples", "500", "--grid", "128", "--seed", "4"},
      {"even-index", "--model", "sphere-product", "--param", "n=3", "--seed", "4"},
  };
  int identical = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::string reports[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / (std::to_string(c) + "_" + std::to_string(rep));
      auto args = commands[c];
      args.push_back("--out");
      args.push_back(out.string());
      std::ostringstream sink_out, sink_err;
      cli::run(args, sink_out, sink_err);
      reports[rep] = read_without_timestamp(out / "report.json");
    }
    if (!reports[0].empty() && reports[0] == reports[1]) ++identical;
  }
  fs::remove_all(root);
  return {identical == static_cast<int>(commands.size()),
          std::to_string(identical) + "/" + std::to_string(commands.size()) +
              " commands byte-identical across repeated runs"};
}
#endif

}  // namespace

int main() {
  std::printf("momentlab acceptance\n");
  run(1, "closed-form flow", 1, closed_form_flow);
  run(2, "normalized descent", 5, normalized_descent);
  run(3, "hull equals fixed images", 10, ags_desk_scale);
  run(4, "counterexample detection", 10, counterexample_detection);
  run(5, "complex-structure suite", 5, complex_structure_suite);
  run(6, "even-index audit", 10, even_index);
  run(7, "rational independence", 1, rational);
  run(8, "good projection", 10, good_projection);
  run(9, "loop-group functionals", 30, loop_functionals);
  run(10, "loop momentum convexity", 60, loop_convexity);
#ifdef MOMENTLAB_HAVE_CLI
  run(11, "determinism", 60, determinism);
#else
  run(11, "determinism", 60, [] { return Outcome{false, "CLI not built"}; });
#endif
  std::printf("%d failing criteria\n", failures);
  return failures == 0 ? 0 : 1;
}
