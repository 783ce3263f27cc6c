#include "doctest.h"
#include "helpers.hpp"

#include "momentlab/error.hpp"
#include "momentlab/loop_group.hpp"
#include "momentlab/models.hpp"

#include <algorithm>
#include <set>

using namespace momentlab;
using namespace testutil;

namespace {

struct Entry {
  std::string name;
  ParamList params;
};

const std::vector<Entry>& all_models() {
  static const std::vector<Entry> e = {
      {"morse-chart", {{"d_plus", 1}, {"d_minus", 1}}},
      {"morse-chart", {{"d_plus", 2}, {"d_minus", 2}}},
      {"sphere", {}},
      {"sphere-product", {{"n", 2}}},
      {"sphere-product", {{"n", 3}}},
      {"height-circle-map", {}},
      {"loop-truncation", {{"K", 1}, {"grid", 32}}},
  };
  return e;
}

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("registry: names and closed-form values") {
  const auto& names = registry_names();
  for (const char* n : {"morse-chart", "sphere", "sphere-product", "height-circle-map", "loop-truncation"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());

  const auto sphere = registry_get("sphere");
  CHECK(sphere->momentum(v3(0, 0, 1))(0) == doctest::Approx(1.0));
  CHECK(sphere->dimension() == 2);

  const auto chart = registry_get("morse-chart", {{"d_plus", 2}, {"d_minus", 1}});
  CHECK(chart->momentum(v3(1, 1, 1))(0) == doctest::Approx(1.0));
  CHECK(morse_quadratic(2, v3(1, 1, 1)) == doctest::Approx(1.0));

  const auto sp = registry_get("sphere-product", {{"n", 2}});
  Vec x(6);
  x << 0, 0, 1, 0, 0, -1;
  const Vec mu = sp->momentum(x);
  CHECK(mu(0) == doctest::Approx(1.0));
  CHECK(mu(1) == doctest::Approx(-1.0));
  CHECK(sp->dimension() == 4);
  CHECK(sp->action_dim() == 2);
}

TEST_CASE("registry: invalid requests") {
  CHECK_THROWS_AS(registry_get("torus"), NotAvailable);
  CHECK_THROWS_AS(registry_get("morse-chart", {{"d_plus", -1}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("morse-chart", {{"d_plus", 0}, {"d_minus", 0}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("morse-chart", {{"d_plus", 1.5}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("sphere-product", {{"n", 0}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("loop-truncation", {{"K", 0}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("loop-truncation", {{"K", 2}, {"grid", 8}}), InvalidArgument);
  CHECK_THROWS_AS(registry_get("sphere", {{"radius", 2}}), InvalidArgument);
}

TEST_CASE("fixed points: poles, pole combinations and the origin") {
  const auto sphere = registry_get("sphere");
  const auto fp = sphere->fixed_points();
  REQUIRE(fp.size() == 2);
  std::vector<double> images = {fp[0].mu_image(0), fp[1].mu_image(0)};
  std::sort(images.begin(), images.end());
  CHECK(images[0] == doctest::Approx(-1));
  CHECK(images[1] == doctest::Approx(1));
  for (const auto& r : fp) CHECK(std::abs(std::abs(r.point(2)) - 1) < 1e-15);

  const auto sp = registry_get("sphere-product", {{"n", 2}});
  const auto fp2 = sp->fixed_points();
  REQUIRE(fp2.size() == 4);
  std::set<std::pair<int, int>> corners;
  for (const auto& r : fp2)
    corners.insert({static_cast<int>(std::lround(r.mu_image(0))), static_cast<int>(std::lround(r.mu_image(1)))});
  CHECK(corners == std::set<std::pair<int, int>>{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});
  CHECK(registry_get("sphere-product", {{"n", 3}})->fixed_points().size() == 8);

  const auto chart = registry_get("morse-chart");
  const auto fp3 = chart->fixed_points();
  REQUIRE(fp3.size() == 1);
  CHECK(fp3[0].point.norm() == 0.0);
  CHECK(fp3[0].mu_image(0) == 0.0);
}

TEST_CASE("fixed points are zeros of every generator field") {
  std::mt19937_64 rng(1);
  for (const auto& e : all_models()) {
    const auto m = registry_get(e.name, e.params);
    if (!m->has_action()) continue;
    for (const auto& r : m->fixed_points())
      for (int t = 0; t < 5; ++t)
        CHECK(m->generator_field(gaussian_vec(m->action_dim(), rng), r.point).norm() <= 1e-10);
  }
}

TEST_CASE("projection onto the manifold") {
  const auto sphere = registry_get("sphere");
  CHECK((sphere->project(v3(0, 0, 2)) - v3(0, 0, 1)).norm() < 1e-12);
  CHECK((sphere->project(v3(0.3, 0.4, 0)) - v3(0.6, 0.8, 0)).norm() < 1e-12);
  const auto chart = registry_get("morse-chart", {{"d_plus", 2}, {"d_minus", 1}});
  const Vec p = v3(0.3, -2, 5);
  CHECK(chart->project(p) == p);
  CHECK_THROWS_AS(sphere->project(v3(0, 0, 0)), ConvergenceError);
}

TEST_CASE("tangent projector is a symmetric idempotent annihilating constraint normals") {
  std::mt19937_64 rng(2);
  for (const auto& e : all_models()) {
    const auto m = registry_get(e.name, e.params);
    for (const Vec& x : sample_manifold(*m, 10, rng)) {
      CHECK(m->constraint_residual(x) <= 1e-10);
      const Mat p = m->tangent_projector(x);
      CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
      const Mat b = m->tangent_basis(x);
      CHECK(b.cols() == m->dimension());
      CHECK((b.transpose() * b - Mat::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Hamiltonian identity d mu^xi (v) = omega(X_xi, v) by finite differences") {
  std::mt19937_64 rng(3);
  for (const auto& e : all_models()) {
    const auto m = registry_get(e.name, e.params);
    if (!m->hamiltonian()) continue;
    for (const Vec& x : sample_manifold(*m, 40, rng)) {
      const Mat b = m->tangent_basis(x);
      for (int s = 0; s < 5; ++s) {
        const Vec xi = gaussian_vec(m->action_dim(), rng);
        const Vec field = m->generator_field(xi, x);
        for (int t = 0; t < 4; ++t) {
          const Vec v = b * gaussian_vec(static_cast<int>(b.cols()), rng);
          constexpr double h = 1e-5;
          const double fd = xi.dot(m->momentum(x + h * v) - m->momentum(x - h * v)) / (2 * h);
          CHECK(std::abs(fd - m->omega(x, field, v)) <= 1e-6 * (1 + v.norm()));
          CHECK(std::abs(xi.dot(m->momentum_jacobian(x) * v) - fd) <= 1e-6 * (1 + v.norm()));
        }
      }
    }
  }
}

TEST_CASE("momentum is constant along orbits") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(-3, 3);
  for (const auto& e : all_models()) {
    const auto m = registry_get(e.name, e.params);
    if (!m->has_action()) continue;
    for (const Vec& x : sample_manifold(*m, 10, rng)) {
      Vec xi = gaussian_vec(m->action_dim(), rng);
      // the coefficient-space rotation of loop-truncation is a chart action,
      // only conjugation is an exact symmetry of (p, E) there
      if (e.name == "loop-truncation") xi(1) = 0.0;
      const Vec y = m->act(xi, angle(rng), x);
      CHECK(m->constraint_residual(y) <= 1e-10);
      CHECK((m->momentum(y) - m->momentum(x)).norm() <= 1e-8);
    }
  }
}

TEST_CASE("generator fields do not vanish at generic points") {
  std::mt19937_64 rng(5);
  for (const auto& e : all_models()) {
    const auto m = registry_get(e.name, e.params);
    if (!m->has_action()) continue;
    for (const Vec& x : sample_manifold(*m, 20, rng))
      CHECK(m->generator_field(gaussian_vec(m->action_dim(), rng), x).norm() > 1e-6);
  }
}

TEST_CASE("Morse charts put mu^xi into normal form near fixed points") {
  std::mt19937_64 rng(6);
  int charts = 0;
  for (const auto& e : all_models()) {
    const auto m = registry_get(e.name, e.params);
    if (e.name == "loop-truncation") continue;
    for (int t = 0; t < 3; ++t) {
      const Vec xi = gaussian_vec(m->action_dim(), rng);
      for (const auto& rec : m->fixed_points()) {
        const auto chart = m->morse_chart(xi, rec.point);
        if (!chart) continue;
        ++charts;
        for (int s = 0; s < 5; ++s) {
          const Vec x = m->project(rec.point + 0.05 * gaussian_vec(m->ambient_dim(), rng));
          const Vec z = chart->coords(x);
          const double lhs = xi.dot(m->momentum(x) - rec.mu_image);
          const double rhs = (chart->signs.array() * z.array().square()).sum();
          CHECK(std::abs(lhs - rhs) <= 1e-12);
        }
      }
    }
  }
  CHECK(charts >= 50);
}

TEST_CASE("height-circle-map lifts level values to R") {
  const auto h = registry_get("height-circle-map");
  CHECK(h->circle_valued());
  Vec c(1);
  c << -1;
  CHECK(h->level_lifts(c).size() == 2);
  c << 0.5;
  auto l = h->level_lifts(c);
  REQUIRE(l.size() == 1);
  CHECK(l[0](0) == doctest::Approx(0.5));
  c << 2.5;
  l = h->level_lifts(c);
  REQUIRE(l.size() == 1);
  CHECK(l[0](0) == doctest::Approx(0.5));
}

TEST_CASE("loop-truncation momentum matches the loop-group functionals") {
  const auto m = registry_get("loop-truncation", {{"K", 2}, {"grid", 64}});
  CHECK(m->momentum(Vec::Zero(12)).norm() < 1e-14);
  std::mt19937_64 rng(7);
  const Vec c = 0.2 * gaussian_vec(12, rng);
  const Vec direct = loop::momentum_image(loop::loop_eval(loop::FourierLoop::from_coefficients(c, 64)));
  CHECK((m->momentum(c) - direct).norm() < 1e-15);
  CHECK(!m->hamiltonian());
  CHECK(!m->compact());
}

TEST_CASE("sampling is deterministic per seed") {
  const auto m = registry_get("sphere-product", {{"n", 2}});
  std::mt19937_64 a(9), b(9);
  const auto sa = sample_manifold(*m, 20, a);
  const auto sb = sample_manifold(*m, 20, b);
  for (std::size_t i = 0; i < sa.size(); ++i) CHECK(sa[i] == sb[i]);
}
