#include "momentlab/error.hpp"
#include "momentlab/rational.hpp"

#include <cmath>
#include <random>

namespace momentlab {

std::optional<ProjectionChoice> evaluate_projection(const Vec& p_in, const Vec& theta,
                                                    const Mat& embedding, const Vec& h,
                                                    long long coeff_bound) {
  const auto dim = p_in.size();
  if (theta.size() != dim || h.size() != dim || embedding.cols() != dim)
    throw DimensionError("projection candidate dimensions disagree");
  if (p_in.norm() == 0.0) throw InvalidArgument("kernel generator must be nonzero");
  const Vec p = p_in.normalized();
  if (std::abs(theta.dot(p)) > 1e-12) return std::nullopt;
  // pi^*(R^n) = p^perp must differ from H = h^perp
  if (std::abs(p.dot(h)) >= (1.0 - 1e-12) * h.norm()) return std::nullopt;

  ProjectionChoice out;
  out.kernel = p;
  out.theta = theta;
  out.embedded_theta = embedding * theta;
  out.certificate = rationally_independent(out.embedded_theta, coeff_bound);
  if (!out.certificate.independent) return std::nullopt;
  out.matrix = orthogonal_complement(p).transpose();
  out.hyperplane_normal = out.matrix * h;
  return out;
}

ProjectionChoice choose_good_projection(int n_plus_1, const Mat& embedding, const Vec& h,
                                        int trials, std::uint64_t seed) {
  if (n_plus_1 < 2) throw InvalidArgument("n_plus_1 must be at least 2");
  if (embedding.cols() != n_plus_1 || h.size() != n_plus_1)
    throw DimensionError("embedding and hyperplane must act on R^(n+1)");
  if (embedding.rows() < n_plus_1 ||
      singular_values(embedding)(n_plus_1 - 1) < 1e-12 * std::max(1.0, max_abs(embedding)))
    throw InvalidArgument("embedding must have full column rank");
  if (h.norm() == 0.0) throw InvalidArgument("hyperplane normal must be nonzero");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int t = 1; t <= trials; ++t) {
    Vec p(n_plus_1), theta(n_plus_1);
    for (auto& v : p) v = normal(rng);
    for (auto& v : theta) v = normal(rng);
    if (p.norm() == 0.0) continue;
    p.normalize();
    theta -= theta.dot(p) * p;
    theta -= theta.dot(p) * p;  // second pass removes the rounding residue
    auto choice = evaluate_projection(p, theta, embedding, h);
    if (choice) {
      choice->trials_used = t;
      return *choice;
    }
  }
  throw ConvergenceError("no good projection found within the trial budget",
                         static_cast<double>(trials));
}

}  // namespace momentlab
