#include "momentlab/symplectic.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace momentlab {

namespace {

constexpr double kSkewTol = 1e-12;
constexpr double kOmegaSingularTol = 1e-10;
constexpr double kMetricEigTol = 1e-10;
constexpr double kGeneratorTol = 1e-9;

// Group elements exp(sum_j t_j L_j) on the uniform product grid.
std::vector<Mat> torus_grid(std::span<const Mat> generators, int n, Eigen::Index dim) {
  std::vector<std::vector<Mat>> per_axis;
  per_axis.reserve(generators.size());
  for (const Mat& l : generators) {
    std::vector<Mat> axis;
    axis.reserve(n);
    for (int m = 0; m < n; ++m) axis.push_back(expm((2.0 * std::numbers::pi * m / n) * l));
    per_axis.push_back(std::move(axis));
  }
  std::vector<Mat> grid{Mat::Identity(dim, dim)};
  for (const auto& axis : per_axis) {
    std::vector<Mat> next;
    next.reserve(grid.size() * axis.size());
    for (const Mat& g : grid)
      for (const Mat& a : axis) next.push_back(g * a);
    grid = std::move(next);
  }
  return grid;
}

double spectral_radius(const Mat& l) {
  if (l.size() == 0) return 0.0;
  return l.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

SymplecticFrame build_frame(const Mat& omega, const Mat& metric) {
  if (omega.rows() != omega.cols() || metric.rows() != metric.cols() ||
      omega.rows() != metric.rows()) {
    throw DimensionError("omega and metric must be square matrices of the same size");
  }
  const auto n = omega.rows();
  if (n == 0 || n % 2 != 0) throw DimensionError("symplectic dimension must be even and positive");
  if (max_abs(omega + omega.transpose()) > kSkewTol)
    throw InvalidArgument("omega is not skew-symmetric");
  const Vec sv = singular_values(omega);
  if (sv(sv.size() - 1) < kOmegaSingularTol) {
    throw DegenerateError("omega is singular (smallest singular value " +
                              std::to_string(sv(sv.size() - 1)) + ")",
                          sv(sv.size() - 1));
  }
  if (skew_defect(metric) > kSkewTol) throw InvalidArgument("metric is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(metric, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= kMetricEigTol) {
    throw InvalidArgument("metric is not positive definite (min eigenvalue " +
                          std::to_string(eig.eigenvalues().minCoeff()) + ")");
  }

  SymplecticFrame frame;
  frame.dim = static_cast<int>(n);
  frame.omega = omega;
  frame.metric = metric;
  // omega(u, v) = u^T Omega v = (A u)^T G v  =>  A^T G = Omega  =>  A = -G^-1 Omega.
  frame.a_operator = -metric.ldlt().solve(omega);
  return frame;
}

ComplexStructure compatible_complex_structure(const SymplecticFrame& frame) {
  // Work in metric-orthonormal coordinates u~ = R u with G = R^T R, where the
  // metric adjoint becomes the ordinary transpose.
  const Eigen::LLT<Mat> llt(frame.metric);
  const Mat r = llt.matrixU();
  const Mat r_inv = r.inverse();
  const Mat a = r * frame.a_operator * r_inv;
  const Mat p = a * a.transpose();
  Mat inv_sqrt;
  try {
    inv_sqrt = inverse_sqrt_spd(p, 1e-12);
  } catch (const DegenerateError& e) {
    throw DegenerateError(std::string("degenerate frame: A A* is not invertible: ") + e.what(),
                          e.measure());
  }
  // Polar factor of a skew matrix is orthogonal and skew; Newton polar steps
  // clean up what the inverse square root leaves behind.
  Mat q = inv_sqrt * a;
  for (int it = 0; it < 3; ++it) {
    q = 0.5 * (q - q.transpose());
    q = 0.5 * (q + q.inverse().transpose());
  }
  q = 0.5 * (q - q.transpose());
  ComplexStructure out;
  out.j = r_inv * q * r;
  return out;
}

HessianSpectrum hessian_spectrum(const Mat& h, std::optional<double> tol) {
  if (h.rows() != h.cols()) throw DimensionError("Hessian must be square");
  if (skew_defect(h) > 1e-10 * std::max(1.0, max_abs(h)))
    throw InvalidArgument("Hessian is not symmetric");
  HessianSpectrum out;
  if (h.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
  out.eigenvalues = eig.eigenvalues();
  const double largest = out.eigenvalues.cwiseAbs().maxCoeff();
  out.tolerance = tol.value_or(1e-8 * largest);
  for (double lam : out.eigenvalues) {
    if (std::abs(lam) <= out.tolerance)
      out.degenerate = true;
    else if (lam < 0)
      ++out.index;
    else
      ++out.coindex;
  }
  return out;
}

Mat average_metric(const Mat& metric, std::span<const Mat> generators, int quadrature_points) {
  if (quadrature_points < 4) throw InvalidArgument("quadrature_points must be at least 4");
  const auto grid = torus_grid(generators, quadrature_points, metric.rows());
  Mat acc = Mat::Zero(metric.rows(), metric.cols());
  for (const Mat& g : grid) acc += g.transpose() * metric * g;
  acc /= static_cast<double>(grid.size());
  return 0.5 * (acc + acc.transpose());
}

IsotropyWeights isotropy_weights(const SymplecticFrame& frame, std::span<const Mat> generators) {
  const auto dim = frame.dim;
  double scale = 1.0;
  for (const Mat& l : generators) {
    if (l.rows() != dim || l.cols() != dim)
      throw DimensionError("generator size does not match the frame");
    scale = std::max(scale, max_abs(l));
  }
  for (const Mat& l : generators) {
    if (max_abs(l.transpose() * frame.omega + frame.omega * l) > kGeneratorTol * scale)
      throw InvalidArgument("generator is not infinitesimally symplectic");
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (max_abs(generators[i] * generators[j] - generators[j] * generators[i]) >
          kGeneratorTol * scale * scale)
        throw InvalidArgument("generators do not commute");

  IsotropyWeights out;
  if (generators.empty()) {
    out.fixed_dim = dim;
    return out;
  }

  // Invariant inner product: keep the frame metric when the action already
  // preserves it, otherwise average it over the torus.
  bool invariant = true;
  double rho = 0.0;
  for (const Mat& l : generators) {
    if (max_abs(l.transpose() * frame.metric + frame.metric * l) > kGeneratorTol * scale)
      invariant = false;
    rho = std::max(rho, spectral_radius(l));
  }
  Mat metric = frame.metric;
  if (!invariant) {
    const int n = 4 * static_cast<int>(std::ceil(rho)) + 4;
    if (std::pow(static_cast<double>(n), static_cast<double>(generators.size())) > 2e6)
      throw InvalidArgument("torus averaging grid too large");
    metric = average_metric(frame.metric, generators, n);
  }
  const SymplecticFrame inv_frame = build_frame(frame.omega, metric);
  const Mat j = compatible_complex_structure(inv_frame).j;

  // Generic direction: sqrt of distinct primes are rationally independent, so
  // <alpha, c> separates every pair of distinct integer weights.
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (generators.size() > std::size(kPrimes)) throw InvalidArgument("too many generators");
  Mat combo = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < generators.size(); ++k)
    combo += std::sqrt(static_cast<double>(kPrimes[k])) * generators[k];

  const Eigen::LLT<Mat> llt(metric);
  const Mat r = llt.matrixU();
  const Mat r_inv = r.inverse();
  auto to_orthonormal = [&](const Mat& op) {
    const Mat m = r * op * r_inv;
    return Mat(0.5 * (m + m.transpose()));
  };
  // -J L is metric-self-adjoint with eigenvalue <alpha, c> on V_alpha.
  Eigen::SelfAdjointEigenSolver<Mat> eig(to_orthonormal(-j * combo));
  const Vec& lam = eig.eigenvalues();
  const Mat& vecs = eig.eigenvectors();
  std::vector<Mat> per_gen;
  per_gen.reserve(generators.size());
  for (const Mat& l : generators) per_gen.push_back(to_orthonormal(-j * l));

  const double cluster_tol = 1e-7 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  Eigen::Index i = 0;
  while (i < lam.size()) {
    Eigen::Index end = i + 1;
    while (end < lam.size() && lam(end) - lam(end - 1) <= cluster_tol) ++end;
    const Eigen::Index size = end - i;
    const Mat block = vecs.middleCols(i, size);
    if (std::abs(0.5 * (lam(i) + lam(end - 1))) <= cluster_tol) {
      out.fixed_dim += static_cast<int>(size);
    } else {
      if (size % 2 != 0) throw DegenerateError("odd-dimensional weight space");
      Eigen::VectorXi alpha(static_cast<Eigen::Index>(generators.size()));
      for (std::size_t g = 0; g < generators.size(); ++g) {
        const double value = (block.transpose() * per_gen[g] * block).trace() / size;
        const double rounded = std::round(value);
        if (std::abs(value - rounded) > 1e-6)
          throw InvalidArgument("non-integral weight " + std::to_string(value) +
                                "; generators are not 2 pi periodic");
        alpha(static_cast<Eigen::Index>(g)) = static_cast<int>(rounded);
      }
      for (Eigen::Index c = 0; c < size / 2; ++c) out.weights.push_back(alpha);
    }
    i = end;
  }
  std::sort(out.weights.begin(), out.weights.end(),
            [](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
              return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                                  b.data() + b.size());
            });
  return out;
}

Vec hessian_eigenvalues_from_weights(const IsotropyWeights& w, const Vec& xi) {
  std::vector<double> values(static_cast<std::size_t>(w.fixed_dim), 0.0);
  for (const auto& alpha : w.weights) {
    if (alpha.size() != xi.size()) throw DimensionError("xi does not match the weight rank");
    const double v = -alpha.cast<double>().dot(xi);
    values.push_back(v);
    values.push_back(v);
  }
  std::sort(values.begin(), values.end());
  return Eigen::Map<Vec>(values.data(), static_cast<Eigen::Index>(values.size()));
}

PointMap group_average(PointMap map, std::vector<Mat> generators, int quadrature_points) {
  if (quadrature_points < 4) throw InvalidArgument("quadrature_points must be at least 4");
  if (generators.empty()) return map;
  const auto dim = generators.front().rows();
  auto grid = torus_grid(generators, quadrature_points, dim);
  std::vector<Mat> inverses;
  inverses.reserve(grid.size());
  for (const Mat& g : grid) inverses.push_back(g.inverse());
  return [map = std::move(map), grid = std::move(grid), inverses = std::move(inverses)](const Vec& u) {
    Vec acc = Vec::Zero(u.size());
    for (std::size_t k = 0; k < grid.size(); ++k) acc += grid[k] * map(inverses[k] * u);
    return Vec(acc / static_cast<double>(grid.size()));
  };
}

}  // namespace momentlab
