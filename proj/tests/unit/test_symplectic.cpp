#include "doctest.h"
#include "helpers.hpp"

#include "momentlab/error.hpp"
#include "momentlab/models.hpp"
#include "momentlab/symplectic.hpp"

#include <numbers>

using namespace momentlab;
using namespace testutil;

TEST_CASE("build_frame: standard and scaled forms") {
  Mat omega(2, 2);
  omega << 0, -1, 1, 0;
  const auto f = build_frame(omega, Mat::Identity(2, 2));
  // omega(u,v) = <A u, v>: A = -omega for the identity metric
  CHECK((f.a_operator + omega).norm() < 1e-15);
  const auto g = build_frame(3.0 * omega, Mat::Identity(2, 2));
  CHECK((g.a_operator + 3.0 * omega).norm() < 1e-15);
}

TEST_CASE("build_frame: random 6x6 frame is skew-adjoint and represents omega") {
  std::mt19937_64 rng(11);
  const Mat omega = random_skew(6, rng);
  const Mat metric = random_spd(6, rng);
  const auto f = build_frame(omega, metric);
  CHECK((metric * f.a_operator + f.a_operator.transpose() * metric).cwiseAbs().maxCoeff() < 1e-10);
  for (int t = 0; t < 10; ++t) {
    const Vec u = gaussian_vec(6, rng), v = gaussian_vec(6, rng);
    CHECK(std::abs(f.form(u, v) - f.inner(f.a_operator * u, v)) < 1e-10);
  }
}

TEST_CASE("build_frame: rejects bad input") {
  Mat omega(2, 2);
  omega << 0, -1, 1, 0;
  CHECK_THROWS_AS(build_frame(omega, Mat::Identity(3, 3)), DimensionError);
  CHECK_THROWS_AS(build_frame(Mat::Zero(3, 3), Mat::Identity(3, 3)), DimensionError);
  CHECK_THROWS_AS(build_frame(Mat::Zero(2, 2), Mat::Identity(2, 2)), DegenerateError);
  Mat not_skew = omega;
  not_skew(0, 0) = 1;
  CHECK_THROWS_AS(build_frame(not_skew, Mat::Identity(2, 2)), InvalidArgument);
  CHECK_THROWS_AS(build_frame(omega, -Mat::Identity(2, 2)), InvalidArgument);
  Mat asym = Mat::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS(build_frame(omega, asym), InvalidArgument);
  try {
    Mat tiny = 1e-12 * omega;
    build_frame(tiny, Mat::Identity(2, 2));
    FAIL("expected DegenerateError");
  } catch (const DegenerateError& e) {
    CHECK(e.measure() == doctest::Approx(1e-12).epsilon(1e-6));
  }
}

TEST_CASE("compatible J: hand examples") {
  Mat a(2, 2);
  a << 0, -1, 1, 0;
  // metric I and omega = -A give the frame whose A is the given matrix
  const auto j1 = compatible_complex_structure(build_frame(-a, Mat::Identity(2, 2))).j;
  CHECK((j1 - a).norm() < 1e-14);
  const auto j3 = compatible_complex_structure(build_frame(-3.0 * a, Mat::Identity(2, 2))).j;
  CHECK((j3 - a).norm() < 1e-14);
}

TEST_CASE("compatible J: property over random frames up to dimension 12") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 * (1 + trial % 6);
    const auto f = build_frame(random_skew(d, rng), random_spd(d, rng));
    const Mat j = compatible_complex_structure(f).j;
    const Mat id = Mat::Identity(d, d);
    CHECK((j * j + id).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((j.transpose() * f.metric * j - f.metric).cwiseAbs().maxCoeff() <= 1e-9 * f.metric.norm());
    CHECK((j * f.a_operator - f.a_operator * j).cwiseAbs().maxCoeff() <= 1e-9 * f.a_operator.norm());
    for (int s = 0; s < 20; ++s) {
      const Vec u = gaussian_vec(d, rng), v = gaussian_vec(d, rng);
      CHECK(std::abs(f.form(j * u, j * v) - f.form(u, v)) <= 1e-9 * (1 + f.omega.norm() * u.norm() * v.norm()));
      CHECK(f.form(u, j * u) > 0);
    }
  }
}

TEST_CASE("compatible J agrees with an independent polar-decomposition oracle") {
  // In metric-orthonormal coordinates J is the orthogonal polar factor, which
  // an SVD gives directly: M = U S V^T -> U V^T.
  std::mt19937_64 rng(5);
  for (int d : {4, 8}) {
    const auto f = build_frame(random_skew(d, rng), random_spd(d, rng));
    const Mat r = Eigen::LLT<Mat>(f.metric).matrixU();
    const Mat m = r * f.a_operator * r.inverse();
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat polar = svd.matrixU() * svd.matrixV().transpose();
    const Mat oracle = r.inverse() * polar * r;
    CHECK((compatible_complex_structure(f).j - oracle).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("hessian_spectrum: signatures") {
  Vec d(2);
  d << 2, 3;
  auto h = hessian_spectrum(d.asDiagonal().toDenseMatrix());
  CHECK(h.index == 0);
  CHECK(h.coindex == 2);
  Vec e(3);
  e << 1, -1, -1;
  h = hessian_spectrum(e.asDiagonal().toDenseMatrix());
  CHECK(h.index == 2);
  CHECK(h.coindex == 1);
  CHECK(h.eigenvalues(0) <= h.eigenvalues(1));
  // f = |x+|^2 - |x-|^2 with dim H+ = 2, dim H- = 1
  Vec m(3);
  m << 2, 2, -2;
  h = hessian_spectrum(m.asDiagonal().toDenseMatrix());
  CHECK(h.index == 1);
  CHECK(!h.degenerate);
}

TEST_CASE("hessian_spectrum: degeneracy and symmetry checks") {
  Vec d(3);
  d << 1, 0, -1;
  const auto h = hessian_spectrum(d.asDiagonal().toDenseMatrix());
  CHECK(h.degenerate);
  CHECK(h.index + h.coindex == 2);
  Mat bad = Mat::Identity(2, 2);
  bad(0, 1) = 1;
  CHECK_THROWS_AS(hessian_spectrum(bad), InvalidArgument);
  CHECK_THROWS_AS(hessian_spectrum(Mat::Zero(2, 3)), DimensionError);
  // explicit tolerance overrides the relative default
  Vec small(2);
  small << 1e-3, 1;
  CHECK(hessian_spectrum(small.asDiagonal().toDenseMatrix(), 1e-2).degenerate);
}

TEST_CASE("hessian_spectrum: index + coindex = dim on random nondegenerate input") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const int d = 1 + t % 9;
    const Mat b = gaussian(d, d, rng);
    const auto h = hessian_spectrum(b + b.transpose());
    if (!h.degenerate) CHECK(h.index + h.coindex == d);
  }
}

namespace {
SymplecticFrame area_frame(int d) {
  Mat omega = Mat::Zero(d, d);
  for (int i = 0; i < d; i += 2) omega.block(i, i, 2, 2) = -rot2(1.0);
  return build_frame(omega, Mat::Identity(d, d));
}
}  // namespace

TEST_CASE("isotropy_weights: rotation blocks") {
  const Mat g = rot2(1.0);
  auto w = isotropy_weights(area_frame(2), std::vector<Mat>{g});
  REQUIRE(w.weights.size() == 1);
  CHECK(w.weights[0](0) == 1);
  CHECK(w.fixed_dim == 0);

  w = isotropy_weights(area_frame(2), std::vector<Mat>{Mat::Zero(2, 2)});
  CHECK(w.weights.empty());
  CHECK(w.fixed_dim == 2);

  Mat two = Mat::Zero(4, 4);
  two.block(0, 0, 2, 2) = rot2(1.0);
  two.block(2, 2, 2, 2) = rot2(2.0);
  w = isotropy_weights(area_frame(4), std::vector<Mat>{two});
  REQUIRE(w.weights.size() == 2);
  std::vector<int> got = {w.weights[0](0), w.weights[1](0)};
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<int>{1, 2});
  CHECK(2 * static_cast<int>(w.weights.size()) + w.fixed_dim == 4);
}

TEST_CASE("isotropy_weights: rejects non-symplectic or non-commuting generators") {
  Mat stretch = Mat::Zero(2, 2);
  stretch(0, 0) = 1;
  CHECK_THROWS_AS(isotropy_weights(area_frame(2), std::vector<Mat>{stretch}), InvalidArgument);
  // both lie in sp(2) = sl(2) but do not commute
  Mat hyperbolic = Mat::Zero(2, 2);
  hyperbolic(0, 0) = 1;
  hyperbolic(1, 1) = -1;
  CHECK_THROWS_AS(isotropy_weights(area_frame(2), std::vector<Mat>{rot2(1.0), hyperbolic}),
                  InvalidArgument);
}

TEST_CASE("isotropy_weights reproduce direct Hessian eigenvalues at registry fixed points") {
  std::mt19937_64 rng(8);
  for (const auto& [name, params] : std::vector<std::pair<std::string, ParamList>>{
           {"sphere", {}}, {"sphere-product", {{"n", 2}}}, {"sphere-product", {{"n", 3}}},
           {"morse-chart", {{"d_plus", 2}, {"d_minus", 2}}}}) {
    const auto model = registry_get(name, params);
    for (int t = 0; t < 5; ++t) {
      const Vec xi = gaussian_vec(model->action_dim(), rng);
      for (const auto& rec : model->fixed_points()) {
        REQUIRE(rec.weights.has_value());
        const Vec predicted = hessian_eigenvalues_from_weights(*rec.weights, xi);
        const auto direct = hessian_spectrum(rec.hessian(xi));
        REQUIRE(predicted.size() == direct.eigenvalues.size());
        CHECK((predicted - direct.eigenvalues).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(direct.index % 2 == 0);
        CHECK(direct.coindex % 2 == 0);
      }
    }
  }
}

TEST_CASE("group_average: equivariant, constant and affine maps") {
  const std::vector<Mat> gens = {rot2(1.0)};
  const PointMap id = [](const Vec& u) { return u; };
  Vec c(2);
  c << 0.7, -1.3;
  const PointMap constant = [c](const Vec&) { return c; };
  const PointMap affine = [c](const Vec& u) { Vec r = u + c; return r; };
  const auto avg_id = group_average(id, gens, 64);
  const auto avg_const = group_average(constant, gens, 64);
  const auto avg_aff = group_average(affine, gens, 64);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Vec u = gaussian_vec(2, rng);
    CHECK((avg_id(u) - u).norm() < 1e-12);
    CHECK(avg_const(u).norm() < 1e-12);
    CHECK((avg_aff(u) - u).norm() < 1e-12);
  }
  CHECK_THROWS_AS(group_average(id, gens, 3), InvalidArgument);
}

TEST_CASE("group_average is idempotent and yields an equivariant map") {
  const std::vector<Mat> gens = {rot2(1.0)};
  const PointMap f = [](const Vec& u) {
    Vec r(2);
    r << u(0) * u(0) + std::sin(u(1)), u(0) * u(1) - 0.5;
    return r;
  };
  const auto once = group_average(f, gens, 64);
  const auto twice = group_average(once, gens, 64);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    const Vec u = 0.5 * gaussian_vec(2, rng);
    CHECK((once(u) - twice(u)).norm() < 1e-9);
    const double angle = 2 * std::numbers::pi * 5 / 64;  // grid element
    const Mat g = expm(angle * gens[0]);
    CHECK((once(g * u) - g * once(u)).norm() < 1e-9);
  }
}

TEST_CASE("average_metric returns an invariant inner product") {
  std::mt19937_64 rng(6);
  Mat l = Mat::Zero(4, 4);
  l.block(0, 0, 2, 2) = rot2(1.0);
  l.block(2, 2, 2, 2) = rot2(3.0);
  const Mat g = average_metric(random_spd(4, rng), std::vector<Mat>{l}, 32);
  const Mat rot = expm(0.37 * l);
  CHECK((rot.transpose() * g * rot - g).cwiseAbs().maxCoeff() < 1e-9);
}
