#pragma once

// Sampling of level sets {F = c} on a model, and epsilon-graph components.

#include "momentlab/flow.hpp"
#include "momentlab/models.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace momentlab {

struct LevelSample {
  std::vector<Vec> points;
  int attempts = 0;
  int failures = 0;

  double failure_fraction() const { return attempts ? double(failures) / attempts : 0.0; }
  /// More than 90% of the projections failed.
  bool high_failure() const { return attempts > 0 && failures * 10 > attempts * 9; }
};

/// Vector-valued level function F with Jacobian (q x m).
struct LevelFunction {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
};

/// Proposal from the model, projection onto the manifold, then damped
/// Gauss-Newton with minimum-norm steps on (constraints, F - c). Accepted
/// points satisfy |F - c| <= 1e-9 and constraint residual <= 1e-10.
LevelSample sample_level(const ManifoldModel& model, const LevelFunction& F, const Vec& c,
                         int count, std::uint64_t seed, int max_attempts = 0);

/// {f = c} for a scalar field.
LevelSample sample_level_set(const ManifoldModel& model, const ScalarField& f, double c,
                             int count, std::uint64_t seed);

/// mu^-1(c), all momentum components jointly.
LevelSample sample_momentum_level(const ManifoldModel& model, const Vec& c, int count,
                                  std::uint64_t seed);

struct ComponentLabels {
  std::vector<int> labels;  // 0-based, numbered by first appearance
  int component_count = 0;
  double epsilon = 0.0;
};

/// Auto epsilon: 3 x the median distance to the ceil(log2 n)-th nearest
/// neighbour, floored at 1e-6 x the cloud diameter.
double auto_epsilon(const std::vector<Vec>& points);

/// Union-find over the graph {|x_i - x_j| < epsilon}.
ComponentLabels connected_components(const std::vector<Vec>& points,
                                     std::optional<double> epsilon = std::nullopt);

}  // namespace momentlab
