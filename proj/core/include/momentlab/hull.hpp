#pragma once

// Convex hulls in R^1, R^2, R^3 (lower-dimensional clouds handled in their
// affine span) and point-to-polytope distances.

#include "momentlab/linalg.hpp"

#include <array>
#include <vector>

namespace momentlab {

struct ConvexHull {
  int ambient_dim = 0;
  int affine_dim = -1;                 // -1 for an empty hull
  std::vector<std::size_t> vertex_ids;  // indices into the input cloud
  std::vector<Vec> vertices;

  // affine frame: x = origin + basis * y, y in R^affine_dim
  Vec origin;
  Mat basis;
  std::vector<Vec> local;               // vertices in frame coordinates
  std::vector<std::array<int, 3>> facets;  // affine_dim == 3, outward CCW triangles
  std::vector<Vec> facet_normals;
  std::vector<double> facet_offsets;    // n . y <= offset inside

  bool empty() const { return affine_dim < 0; }
};

/// Vertices are a subset of the input points: n = 1 min/max, n = 2 monotone
/// chain (CCW), n = 3 incremental facet hull. Points within 1e-12 of the
/// affine span of the rest define a lower-dimensional hull.
ConvexHull convex_hull(const std::vector<Vec>& points);

/// Euclidean distance from q to the hull polytope (0 inside).
double distance_to_hull(const ConvexHull& hull, const Vec& q);

}  // namespace momentlab
