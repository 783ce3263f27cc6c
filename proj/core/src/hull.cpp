#include "momentlab/hull.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace momentlab {

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

std::vector<std::size_t> hull_1d(const std::vector<Vec>& y) {
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i](0) < y[lo](0)) lo = i;
    if (y[i](0) > y[hi](0)) hi = i;
  }
  if (lo == hi) return {lo};
  return {lo, hi};
}

// Andrew's monotone chain; CCW, collinear points dropped.
std::vector<std::size_t> hull_2d(const std::vector<Vec>& y) {
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return y[a](0) < y[b](0) || (y[a](0) == y[b](0) && y[a](1) < y[b](1));
  });
  std::vector<std::size_t> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross2(y[h[k - 2]], y[h[k - 1]], y[idx[i]]) <= 0) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(y[h[k - 2]], y[h[k - 1]], y[idx[i]]) <= 0) --k;
    h[k++] = idx[i];
  }
  h.resize(k > 1 ? k - 1 : k);
  return h;
}

struct Face {
  std::array<std::size_t, 3> v;
  Eigen::Vector3d n;
  double off;
  bool alive = true;
};

Face make_face(const std::vector<Eigen::Vector3d>& p, std::size_t a, std::size_t b,
               std::size_t c) {
  Face f;
  f.v = {a, b, c};
  f.n = (p[b] - p[a]).cross(p[c] - p[a]);
  const double len = f.n.norm();
  if (len > 0) f.n /= len;
  f.off = f.n.dot(p[a]);
  return f;
}

struct Hull3 {
  std::vector<std::size_t> vertices;
  std::vector<std::array<std::size_t, 3>> faces;
};

Hull3 hull_3d(const std::vector<Vec>& y) {
  const std::size_t n = y.size();
  std::vector<Eigen::Vector3d> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = y[i].head<3>();

  // initial tetrahedron from extreme points
  std::size_t i0 = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (p[i](0) < p[i0](0)) i0 = i;
  std::size_t i1 = i0;
  double best = -1;
  for (std::size_t i = 0; i < n; ++i)
    if ((p[i] - p[i0]).norm() > best) best = (p[i] - p[i0]).norm(), i1 = i;
  std::size_t i2 = i0;
  best = -1;
  const Eigen::Vector3d dir = (p[i1] - p[i0]).normalized();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (p[i] - p[i0]).cross(dir).norm();
    if (d > best) best = d, i2 = i;
  }
  std::size_t i3 = i0;
  best = -1;
  const Eigen::Vector3d nrm = (p[i1] - p[i0]).cross(p[i2] - p[i0]).normalized();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs((p[i] - p[i0]).dot(nrm));
    if (d > best) best = d, i3 = i;
  }

  double scale = 0.0;
  for (const auto& q : p) scale = std::max(scale, (q - p[i0]).norm());
  const double eps = 1e-12 * std::max(scale, 1e-300);

  std::vector<Face> faces;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_face;
  auto add_face = [&](std::size_t a, std::size_t b, std::size_t c) {
    faces.push_back(make_face(p, a, b, c));
    const std::size_t id = faces.size() - 1;
    edge_face[{a, b}] = id;
    edge_face[{b, c}] = id;
    edge_face[{c, a}] = id;
  };
  const Eigen::Vector3d centroid = (p[i0] + p[i1] + p[i2] + p[i3]) / 4.0;
  auto oriented = [&](std::size_t a, std::size_t b, std::size_t c) {
    const Face f = make_face(p, a, b, c);
    if (f.n.dot(centroid) > f.off) add_face(a, c, b);
    else add_face(a, b, c);
  };
  oriented(i0, i1, i2);
  oriented(i0, i1, i3);
  oriented(i0, i2, i3);
  oriented(i1, i2, i3);

  for (std::size_t q = 0; q < n; ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    std::vector<std::size_t> visible;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].alive && faces[f].n.dot(p[q]) - faces[f].off > eps) visible.push_back(f);
    if (visible.empty()) continue;
    std::vector<char> is_visible(faces.size(), 0);
    for (auto f : visible) is_visible[f] = 1;
    std::vector<std::pair<std::size_t, std::size_t>> horizon;
    for (auto f : visible) {
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) {
        const std::size_t a = v[e], b = v[(e + 1) % 3];
        const auto it = edge_face.find({b, a});
        if (it == edge_face.end() || !is_visible[it->second]) horizon.emplace_back(a, b);
      }
    }
    for (auto f : visible) {
      faces[f].alive = false;
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) {
        const auto it = edge_face.find({v[e], v[(e + 1) % 3]});
        if (it != edge_face.end() && it->second == f) edge_face.erase(it);
      }
    }
    for (const auto& [a, b] : horizon) add_face(a, b, q);
  }

  Hull3 out;
  std::vector<char> used(n, 0);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    out.faces.push_back(f.v);
    for (auto v : f.v) used[v] = 1;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (used[i]) out.vertices.push_back(i);
  return out;
}

double segment_distance(const Vec& a, const Vec& b, const Vec& q) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (q - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (q - (a + t * ab)).norm();
}

// Closest point on triangle abc to q (region tests on barycentric coordinates).
double triangle_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                         const Eigen::Vector3d& c, const Eigen::Vector3d& q) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = q - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return (q - a).norm();
  const Eigen::Vector3d bp = q - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return (q - b).norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (q - (a + (d1 / (d1 - d3)) * ab)).norm();
  const Eigen::Vector3d cp = q - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return (q - c).norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (q - (a + (d2 / (d2 - d6)) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return (q - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b))).norm();
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (q - (a + ab * v + ac * w)).norm();
}

}  // namespace

ConvexHull convex_hull(const std::vector<Vec>& points) {
  ConvexHull hull;
  if (points.empty()) return hull;
  const auto d = points.front().size();
  if (d < 1 || d > 3) throw DimensionError("convex_hull supports dimensions 1 to 3");
  for (const auto& q : points)
    if (q.size() != d) throw DimensionError("points have mixed dimensions");
  hull.ambient_dim = static_cast<int>(d);

  Vec centroid = Vec::Zero(d);
  for (const auto& q : points) centroid += q;
  centroid /= static_cast<double>(points.size());
  Mat centered(static_cast<Eigen::Index>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i)
    centered.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullV);
  const Vec s = svd.singularValues();
  double extent = 0.0;
  for (const auto& q : points) extent = std::max(extent, (q - centroid).norm());
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0) && s(i) > 1e-14 * std::max(1.0, centroid.norm()) * std::sqrt(double(points.size()))) ++rank;
  if (extent == 0.0) rank = 0;

  hull.affine_dim = rank;
  hull.origin = centroid;
  hull.basis = svd.matrixV().leftCols(rank);
  // full-rank clouds keep the ambient axes so facets live in ambient coordinates
  if (rank == hull.ambient_dim) hull.basis = Mat::Identity(d, d);
  std::vector<Vec> y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) y[i] = hull.basis.transpose() * (points[i] - centroid);

  std::vector<std::size_t> ids;
  if (rank == 0) {
    ids = {0};
  } else if (rank == 1) {
    ids = hull_1d(y);
  } else if (rank == 2) {
    ids = hull_2d(y);
  } else {
    const Hull3 h3 = hull_3d(y);
    ids = h3.vertices;
    std::map<std::size_t, int> local_index;
    for (std::size_t k = 0; k < ids.size(); ++k) local_index[ids[k]] = static_cast<int>(k);
    for (const auto& f : h3.faces) {
      hull.facets.push_back({local_index[f[0]], local_index[f[1]], local_index[f[2]]});
    }
  }
  for (auto i : ids) {
    hull.vertex_ids.push_back(i);
    hull.vertices.push_back(points[i]);
    hull.local.push_back(y[i]);
  }
  for (const auto& f : hull.facets) {
    const Eigen::Vector3d a = hull.local[f[0]].head<3>();
    const Eigen::Vector3d b = hull.local[f[1]].head<3>();
    const Eigen::Vector3d c = hull.local[f[2]].head<3>();
    const Eigen::Vector3d n = (b - a).cross(c - a).normalized();
    hull.facet_normals.push_back(n);
    hull.facet_offsets.push_back(n.dot(a));
  }
  return hull;
}

double distance_to_hull(const ConvexHull& hull, const Vec& q) {
  if (hull.empty()) throw InvalidArgument("distance to an empty hull");
  if (q.size() != hull.ambient_dim) throw DimensionError("query point has the wrong dimension");
  const Vec rel = q - hull.origin;
  const Vec y = hull.basis.transpose() * rel;
  const double orth = (rel - hull.basis * y).norm();
  double d = 0.0;
  switch (hull.affine_dim) {
    case 0:
      return (q - hull.vertices[0]).norm();
    case 1: {
      double lo = hull.local[0](0), hi = lo;
      for (const auto& v : hull.local) lo = std::min(lo, v(0)), hi = std::max(hi, v(0));
      d = std::max({0.0, lo - y(0), y(0) - hi});
      break;
    }
    case 2: {
      const auto& v = hull.local;
      const std::size_t m = v.size();
      if (m < 3) {
        d = m == 1 ? (y - v[0]).norm() : segment_distance(v[0], v[1], y);
        break;
      }
      bool inside = true;
      for (std::size_t i = 0; i < m && inside; ++i)
        if (cross2(v[i], v[(i + 1) % m], y) < 0) inside = false;
      if (inside) break;
      d = INFINITY;
      for (std::size_t i = 0; i < m; ++i) d = std::min(d, segment_distance(v[i], v[(i + 1) % m], y));
      break;
    }
    default: {
      bool inside = true;
      for (std::size_t f = 0; f < hull.facets.size() && inside; ++f)
        if (hull.facet_normals[f].dot(y.head<3>()) > hull.facet_offsets[f]) inside = false;
      if (inside) break;
      d = INFINITY;
      const Eigen::Vector3d yy = y.head<3>();
      for (const auto& f : hull.facets)
        d = std::min(d, triangle_distance(hull.local[f[0]].head<3>(), hull.local[f[1]].head<3>(),
                                          hull.local[f[2]].head<3>(), yy));
    }
  }
  return std::hypot(orth, d);
}

}  // namespace momentlab
