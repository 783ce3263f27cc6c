#include "momentlab/convexity.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace momentlab {

std::vector<Vec> momentum_image_sample(const ManifoldModel& model, int count, std::uint64_t seed) {
  if (count < 0) throw InvalidArgument("sample count must be nonnegative");
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  for (const Vec& x : sample_manifold(model, count, rng)) out.push_back(model.momentum(x));
  return out;
}

namespace {

struct Nearest {
  std::size_t index = 0;
  double distance = INFINITY;
};

Nearest nearest(const std::vector<Vec>& ref, const Vec& q) {
  Nearest best;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = (ref[i] - q).squaredNorm();
    if (d < best.distance) best = {i, d};
  }
  best.distance = std::sqrt(best.distance);
  return best;
}

double kth_neighbour_distance(const std::vector<Vec>& ref, std::size_t i, std::size_t k) {
  if (ref.size() <= 1) return 0.0;
  k = std::min(k, ref.size() - 1);
  std::vector<double> d;
  d.reserve(ref.size() - 1);
  for (std::size_t j = 0; j < ref.size(); ++j)
    if (j != i) d.push_back((ref[j] - ref[i]).norm());
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
  return d[k - 1];
}

double sigma_min_tangent(const ManifoldModel& model, const Vec& x) {
  const Mat dmu = model.momentum_jacobian(x) * model.tangent_basis(x);
  const Vec s = singular_values(dmu);
  return s.size() ? s(s.size() - 1) : 0.0;
}

constexpr double kSingularTol = 1e-7;

}  // namespace

ConvexityReport verify_convexity(const std::vector<Vec>& cloud, int pair_trials, double tolerance,
                                 std::uint64_t seed, ToleranceMode mode,
                                 const std::vector<Vec>& extra) {
  if (cloud.empty()) throw InvalidArgument("verify_convexity needs a nonempty cloud");
  if (pair_trials < 0) throw InvalidArgument("pair_trials must be nonnegative");
  ConvexityReport rep;
  rep.samples = cloud;
  rep.tolerance = tolerance;
  rep.mode = mode;
  rep.pair_trials = pair_trials;
  if (cloud.front().size() <= 3) rep.hull_vertices = convex_hull(cloud).vertices;

  std::vector<Vec> ref = cloud;
  ref.insert(ref.end(), extra.begin(), extra.end());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cloud.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < pair_trials; ++trial) {
    const std::size_t i = pick(rng), j = pick(rng);
    double t = unit(rng);
    if (t == 0.0) t = 0.5;
    const Vec m = (1.0 - t) * cloud[i] + t * cloud[j];
    const Nearest nn = nearest(ref, m);
    double excess = nn.distance;
    if (mode == ToleranceMode::cloud_relative)
      excess = std::max(0.0, nn.distance - 3.0 * kth_neighbour_distance(ref, nn.index, 4));
    rep.max_outside_distance = std::max(rep.max_outside_distance, excess);
    if (excess > tolerance) ++rep.midpoint_violations;
  }
  rep.pass = rep.midpoint_violations == 0 && rep.max_outside_distance <= tolerance;
  return rep;
}

ConvexityReport verify_hull_against_fixed(const std::vector<Vec>& cloud,
                                          const std::vector<Vec>& fixed_images, double tolerance) {
  if (fixed_images.empty()) throw InvalidArgument("no fixed-point images");
  if (cloud.empty()) throw InvalidArgument("empty sample cloud");
  ConvexityReport rep;
  rep.samples = cloud;
  rep.fixed_images = fixed_images;
  rep.tolerance = tolerance;
  const ConvexHull fixed_hull = convex_hull(fixed_images);
  const ConvexHull sample_hull = convex_hull(cloud);
  rep.hull_vertices = sample_hull.vertices;
  for (const Vec& s : cloud)
    rep.max_sample_to_fixed_hull = std::max(rep.max_sample_to_fixed_hull, distance_to_hull(fixed_hull, s));
  for (const Vec& v : fixed_hull.vertices)
    rep.max_fixed_vertex_to_sample_hull =
        std::max(rep.max_fixed_vertex_to_sample_hull, distance_to_hull(sample_hull, v));
  rep.max_outside_distance = rep.max_sample_to_fixed_hull;
  rep.pass = rep.max_sample_to_fixed_hull <= tolerance &&
             rep.max_fixed_vertex_to_sample_hull <= tolerance;
  return rep;
}

ConvexityReport verify_hull_equals_fixed_images(const ManifoldModel& model, int sample_count,
                                                double tolerance, std::uint64_t seed) {
  if (!model.has_fixed_points())
    throw NotAvailable("model '" + model.name() + "' has no fixed point enumeration");
  std::vector<Vec> fixed;
  for (const auto& r : model.fixed_points()) fixed.push_back(r.mu_image);
  return verify_hull_against_fixed(momentum_image_sample(model, sample_count, seed), fixed,
                                   tolerance);
}

std::string to_string(LevelKind k) {
  switch (k) {
    case LevelKind::regular: return "regular";
    case LevelKind::singular: return "singular";
    case LevelKind::empty: return "empty";
  }
  return "unknown";
}

double distance_to_weight_hyperplanes(const std::vector<FixedPointRecord>& fixed, const Vec& c) {
  double best = INFINITY;
  const auto n = c.size();
  for (const auto& rec : fixed) {
    const Vec rel = c - rec.mu_image;
    if (n == 1) {
      best = std::min(best, rel.norm());
      continue;
    }
    if (!rec.weights) continue;
    std::vector<Vec> w;
    for (const auto& a : rec.weights->weights) {
      const Vec v = a.cast<double>();
      if (std::none_of(w.begin(), w.end(), [&](const Vec& u) { return (u - v).norm() == 0.0; }))
        w.push_back(v);
    }
    // every (n-1)-subset; a rank-deficient subset spans a subspace of some
    // hyperplane, so distance to that subspace is an upper bound we can use
    const auto k = static_cast<std::size_t>(n - 1);
    if (w.size() < k) {
      Mat span(n, static_cast<Eigen::Index>(w.size()));
      for (std::size_t i = 0; i < w.size(); ++i) span.col(static_cast<Eigen::Index>(i)) = w[i];
      Vec proj = Vec::Zero(n);
      if (!w.empty()) proj = span * min_norm_solve(span, rel, 1e-12);
      best = std::min(best, (rel - proj).norm());
      continue;
    }
    std::vector<bool> mask(w.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      Mat span(n, static_cast<Eigen::Index>(k));
      Eigen::Index col = 0;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (mask[i]) span.col(col++) = w[i];
      const Vec proj = span * min_norm_solve(span, rel, 1e-12);
      best = std::min(best, (rel - proj).norm());
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return best;
}

RegularValueScan regular_value_scan(const ManifoldModel& model, const std::vector<Vec>& grid,
                                    int samples_per_level, std::uint64_t seed) {
  if (!model.has_fixed_points())
    throw NotAvailable("model '" + model.name() + "' has no fixed point enumeration");
  const auto fixed = model.fixed_points();
  RegularValueScan scan;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec& c = grid[i];
    LevelClassification lc;
    lc.value = c;
    const LevelSample s = sample_momentum_level(model, c, samples_per_level, seed + 7919 * i);
    lc.sampled_points = static_cast<int>(s.points.size());
    lc.failure_fraction = s.failure_fraction();
    for (const auto& r : fixed)
      if ((r.mu_image - c).norm() <= 1e-9) lc.hits_fixed_image = true;
    if (s.points.empty() && !lc.hits_fixed_image) {
      lc.kind = LevelKind::empty;
    } else {
      lc.min_singular_value = INFINITY;
      for (const Vec& x : s.points) lc.min_singular_value = std::min(lc.min_singular_value, sigma_min_tangent(model, x));
      if (lc.hits_fixed_image) lc.min_singular_value = 0.0;
      lc.kind = lc.min_singular_value < kSingularTol ? LevelKind::singular : LevelKind::regular;
    }
    if (lc.kind == LevelKind::singular) {
      lc.hyperplane_distance = distance_to_weight_hyperplanes(fixed, c);
      lc.on_hyperplanes = lc.hyperplane_distance <= 1e-6;
      if (!lc.on_hyperplanes) scan.hyperplane_cover = false;
    }
    scan.levels.push_back(std::move(lc));
  }
  return scan;
}

LevelConnectivityScan level_connectivity_scan(const ManifoldModel& model,
                                              const std::vector<Vec>& grid,
                                              int samples_per_level, std::uint64_t seed,
                                              std::optional<double> epsilon) {
  LevelConnectivityScan scan;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    LevelConnectivity lv;
    lv.value = grid[i];
    lv.lifts = model.level_lifts(grid[i]);
    std::vector<Vec> points;
    int attempts = 0, failures = 0;
    const int per_lift =
        std::max(1, samples_per_level / static_cast<int>(std::max<std::size_t>(1, lv.lifts.size())));
    for (std::size_t l = 0; l < lv.lifts.size(); ++l) {
      const LevelSample s =
          sample_momentum_level(model, lv.lifts[l], per_lift, seed + 7919 * i + 104729 * l);
      points.insert(points.end(), s.points.begin(), s.points.end());
      attempts += s.attempts;
      failures += s.failures;
    }
    lv.point_count = static_cast<int>(points.size());
    lv.failure_fraction = attempts ? double(failures) / attempts : 0.0;
    lv.high_failure = attempts > 0 && failures * 10 > attempts * 9;
    if (points.empty()) {
      lv.kind = LevelKind::empty;
    } else {
      double smin = INFINITY;
      for (const Vec& x : points) smin = std::min(smin, sigma_min_tangent(model, x));
      lv.kind = smin < kSingularTol ? LevelKind::singular : LevelKind::regular;
      const ComponentLabels cl = connected_components(points, epsilon);
      lv.component_count = cl.component_count;
      lv.epsilon = cl.epsilon;
    }
    if (lv.kind == LevelKind::regular) {
      ++scan.regular_levels;
      if (lv.component_count == 1) ++scan.regular_connected;
    }
    scan.levels.push_back(std::move(lv));
  }
  return scan;
}

EvenIndexReport even_index_audit(const ManifoldModel& model, const Vec& xi) {
  if (xi.size() != model.action_dim()) throw DimensionError("xi does not match the action dimension");
  if (xi.norm() == 0.0) throw DegenerateError("xi = 0 makes every Hessian vanish", 0.0);
  EvenIndexReport rep;
  rep.applicable = model.has_action();
  for (const auto& rec : model.fixed_points()) {
    const HessianSpectrum hs = hessian_spectrum(rec.hessian(xi));
    if (hs.degenerate) {
      double m = INFINITY;
      for (double l : hs.eigenvalues) m = std::min(m, std::abs(l));
      throw DegenerateError("degenerate Hessian of mu^xi at a fixed point; xi lies in the bad set, draw another", m);
    }
    EvenIndexEntry e;
    e.point = rec.point;
    e.mu_image = rec.mu_image;
    e.eigenvalues = hs.eigenvalues;
    e.index = hs.index;
    e.coindex = hs.coindex;
    e.even = hs.index % 2 == 0 && hs.coindex % 2 == 0;
    if (!e.even) rep.all_even = false;
    if (hs.index == 1 || hs.coindex == 1) ++rep.index_or_coindex_one;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace momentlab
