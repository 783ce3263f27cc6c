#pragma once

// Momentum-image sampling and the convexity / connectivity / even-index checks.

#include "momentlab/hull.hpp"
#include "momentlab/level_sets.hpp"
#include "momentlab/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

/// mu at `count` on-manifold samples; deterministic per seed.
std::vector<Vec> momentum_image_sample(const ManifoldModel& model, int count, std::uint64_t seed);

enum class ToleranceMode {
  absolute,        // nearest cloud point within tolerance
  cloud_relative,  // within tolerance + 3 x (4th-neighbour distance at the nearest point)
};

struct ConvexityReport {
  std::vector<Vec> samples;
  std::vector<Vec> hull_vertices;
  std::vector<Vec> fixed_images;
  double max_outside_distance = 0.0;
  int midpoint_violations = 0;
  int pair_trials = 0;
  double tolerance = 0.0;
  ToleranceMode mode = ToleranceMode::absolute;
  bool pass = true;

  // hull-vs-fixed-image checks
  double max_sample_to_fixed_hull = 0.0;  // (a)
  double max_fixed_vertex_to_sample_hull = 0.0;  // (b)
  std::string note;
};

/// Midpoint test: pair_trials random pairs (i, j), t ~ U(0,1); the point
/// (1-t) c_i + t c_j must be near the reference cloud (cloud plus `extra`).
/// In cloud_relative mode max_outside_distance is the largest excess over the
/// local allowance.
ConvexityReport verify_convexity(const std::vector<Vec>& cloud, int pair_trials, double tolerance,
                                 std::uint64_t seed,
                                 ToleranceMode mode = ToleranceMode::absolute,
                                 const std::vector<Vec>& extra = {});

/// (a) every sample within tolerance of conv(fixed images); (b) every vertex
/// of conv(fixed images) within tolerance of conv(samples).
ConvexityReport verify_hull_against_fixed(const std::vector<Vec>& cloud,
                                          const std::vector<Vec>& fixed_images, double tolerance);

ConvexityReport verify_hull_equals_fixed_images(const ManifoldModel& model, int sample_count,
                                                double tolerance, std::uint64_t seed = 0);

enum class LevelKind { regular, singular, empty };

std::string to_string(LevelKind k);

struct LevelClassification {
  Vec value;
  LevelKind kind = LevelKind::empty;
  int sampled_points = 0;
  double min_singular_value = 0.0;      // smallest sigma_min(d mu |T) over samples
  bool hits_fixed_image = false;
  double hyperplane_distance = 0.0;     // singular values only
  bool on_hyperplanes = true;
  double failure_fraction = 0.0;
};

struct RegularValueScan {
  std::vector<LevelClassification> levels;
  bool hyperplane_cover = true;  // every singular value within 1e-6 of the union
};

/// Hyperplanes through each mu(p) spanned by (n-1)-subsets of its weights.
double distance_to_weight_hyperplanes(const std::vector<FixedPointRecord>& fixed, const Vec& c);

RegularValueScan regular_value_scan(const ManifoldModel& model, const std::vector<Vec>& grid,
                                    int samples_per_level = 64, std::uint64_t seed = 0);

struct LevelConnectivity {
  Vec value;
  std::vector<Vec> lifts;
  int component_count = 0;
  int point_count = 0;
  double epsilon = 0.0;
  double failure_fraction = 0.0;
  bool high_failure = false;
  LevelKind kind = LevelKind::empty;
};

struct LevelConnectivityScan {
  std::vector<LevelConnectivity> levels;
  int regular_levels = 0;
  int regular_connected = 0;
  double regular_connected_fraction() const {
    return regular_levels ? double(regular_connected) / regular_levels : 1.0;
  }
};

LevelConnectivityScan level_connectivity_scan(const ManifoldModel& model,
                                              const std::vector<Vec>& grid,
                                              int samples_per_level, std::uint64_t seed,
                                              std::optional<double> epsilon = std::nullopt);

struct EvenIndexEntry {
  Vec point;
  Vec mu_image;
  Vec eigenvalues;
  int index = 0;
  int coindex = 0;
  bool even = true;
};

struct EvenIndexReport {
  std::vector<EvenIndexEntry> entries;
  bool applicable = true;   // false when the model carries no torus action
  bool all_even = true;
  int index_or_coindex_one = 0;
};

/// Tangent Hessian of mu^xi at each fixed point. DegenerateError for xi = 0
/// or a degenerate Hessian (xi in the bad set; draw another xi).
EvenIndexReport even_index_audit(const ManifoldModel& model, const Vec& xi);

}  // namespace momentlab
