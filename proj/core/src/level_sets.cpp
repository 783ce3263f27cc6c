#include "momentlab/level_sets.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace momentlab {

namespace {

constexpr double kLevelTol = 1e-9;
constexpr double kConstraintTol = 1e-10;

Vec stacked_residual(const ManifoldModel& model, const LevelFunction& F, const Vec& c,
                     const Vec& x) {
  const Vec g = model.constraints(x);
  const Vec h = F.value(x) - c;
  Vec r(g.size() + h.size());
  r << g, h;
  return r;
}

std::optional<Vec> newton_to_level(const ManifoldModel& model, const LevelFunction& F,
                                   const Vec& c, Vec x) {
  const int k = model.constraint_count();
  for (int iter = 0; iter < 200; ++iter) {
    const Vec r = stacked_residual(model, F, c, x);
    const double rn = r.norm();
    if (!std::isfinite(rn)) return std::nullopt;
    if (rn <= 1e-15) break;
    const Mat jc = model.constraint_jacobian(x);
    const Mat jf = F.jacobian(x);
    Mat j(jc.rows() + jf.rows(), x.size());
    j << jc, jf;
    const Vec step = min_norm_solve(j, r, 1e-12);
    // damping: halve until the residual does not grow
    double alpha = 1.0;
    Vec trial = x - step;
    for (int d = 0; d < 12; ++d) {
      if (stacked_residual(model, F, c, trial).norm() <= rn * (1.0 + 1e-12)) break;
      alpha *= 0.5;
      trial = x - alpha * step;
    }
    x = trial;
    if (alpha * step.norm() <= 1e-12 * std::max(1.0, x.norm())) break;
  }
  const Vec r = stacked_residual(model, F, c, x);
  if (!r.allFinite()) return std::nullopt;
  if (k > 0 && r.head(k).norm() > kConstraintTol) return std::nullopt;
  if (r.tail(r.size() - k).cwiseAbs().maxCoeff() > kLevelTol) return std::nullopt;
  return x;
}

}  // namespace

LevelSample sample_level(const ManifoldModel& model, const LevelFunction& F, const Vec& c,
                         int count, std::uint64_t seed, int max_attempts) {
  if (count < 0) throw InvalidArgument("count must be nonnegative");
  if (max_attempts <= 0) max_attempts = 10 * count + 50;
  LevelSample out;
  std::mt19937_64 rng(seed);
  while (static_cast<int>(out.points.size()) < count && out.attempts < max_attempts) {
    ++out.attempts;
    Vec x;
    try {
      x = model.project(model.propose(rng));
    } catch (const ConvergenceError&) {
      ++out.failures;
      continue;
    }
    auto y = newton_to_level(model, F, c, std::move(x));
    if (y) out.points.push_back(std::move(*y));
    else ++out.failures;
  }
  return out;
}

LevelSample sample_level_set(const ManifoldModel& model, const ScalarField& f, double c,
                             int count, std::uint64_t seed) {
  LevelFunction F;
  F.value = [&f](const Vec& x) { return Vec::Constant(1, f.value(x)); };
  F.jacobian = [&f](const Vec& x) { return Mat(f.gradient(x).transpose()); };
  return sample_level(model, F, Vec::Constant(1, c), count, seed);
}

LevelSample sample_momentum_level(const ManifoldModel& model, const Vec& c, int count,
                                  std::uint64_t seed) {
  if (c.size() != model.action_dim()) throw DimensionError("level value has the wrong dimension");
  LevelFunction F;
  F.value = [&model](const Vec& x) { return model.momentum(x); };
  F.jacobian = [&model](const Vec& x) { return model.momentum_jacobian(x); };
  return sample_level(model, F, c, count, seed);
}

double auto_epsilon(const std::vector<Vec>& points) {
  const auto n = points.size();
  if (n < 2) return 0.0;
  const std::size_t k =
      std::min<std::size_t>(n - 1, std::max<std::size_t>(1, static_cast<std::size_t>(
                                                                std::ceil(std::log2(double(n))))));
  std::vector<double> kth(n);
  std::vector<double> row(n - 1);
  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      row[w] = dist(points[i], points[j]);
      diameter = std::max(diameter, row[w]);
      ++w;
    }
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    kth[i] = row[k - 1];
  }
  std::nth_element(kth.begin(), kth.begin() + static_cast<std::ptrdiff_t>(n / 2), kth.end());
  double median = kth[n / 2];
  if (n % 2 == 0) {
    const double lower = *std::max_element(kth.begin(), kth.begin() + static_cast<std::ptrdiff_t>(n / 2));
    median = 0.5 * (median + lower);
  }
  return std::max(3.0 * median, 1e-6 * diameter);
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ComponentLabels connected_components(const std::vector<Vec>& points,
                                     std::optional<double> epsilon) {
  ComponentLabels out;
  const auto n = points.size();
  out.epsilon = epsilon.value_or(auto_epsilon(points));
  if (epsilon && !(*epsilon >= 0)) throw InvalidArgument("epsilon must be nonnegative");
  if (n == 0) return out;

  // sweep along the first coordinate; pairs further apart there cannot link
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return points[a](0) < points[b](0); });
  UnionFind uf(n);
  const double eps = out.epsilon;
  for (std::size_t a = 0; a < n; ++a) {
    const Vec& pa = points[order[a]];
    for (std::size_t b = a + 1; b < n; ++b) {
      const Vec& pb = points[order[b]];
      if (pb(0) - pa(0) > eps) break;
      if (dist(pa, pb) <= eps) uf.unite(order[a], order[b]);
    }
  }
  out.labels.assign(n, -1);
  std::vector<int> root_label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = out.component_count++;
    out.labels[i] = root_label[r];
  }
  return out;
}

}  // namespace momentlab
