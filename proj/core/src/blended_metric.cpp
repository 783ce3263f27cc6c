#include "momentlab/blended_metric.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace momentlab {

double smoothstep5(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (s * (6.0 * s - 15.0) + 10.0);
}

BlendedMetric::BlendedMetric(ModelPtr model, Vec xi, std::vector<BlendCenter> centers)
    : model_(std::move(model)), xi_(std::move(xi)), centers_(std::move(centers)) {
  f_ = momentum_component(model_, xi_);
}

double BlendedMetric::kappa(std::size_t i, const Vec& x) const {
  const auto& c = centers_.at(i);
  const double d = dist(x, c.point);
  return smoothstep5((c.radius - d) / (0.5 * c.radius));
}

Mat BlendedMetric::metric(const Vec& x) const {
  const int m = model_->ambient_dim();
  Mat g = Mat::Identity(m, m);
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double k = kappa(i, x);
    if (k <= 0.0) continue;
    const Mat d = centers_[i].chart.jacobian(x);
    g = (1.0 - k) * Mat::Identity(m, m) + centers_[i].a_p * k * (d.transpose() * d);
    break;  // balls are disjoint
  }
  return g;
}

double BlendedMetric::norm(const Vec& x, const Vec& v) const {
  return std::sqrt(std::max(0.0, v.dot(metric(x) * v)));
}

Vec BlendedMetric::gradient(const Vec& x) const {
  const Mat b = model_->tangent_basis(x);
  const Mat gt = b.transpose() * metric(x) * b;
  const Vec rhs = b.transpose() * f_.gradient(x);
  return b * gt.ldlt().solve(rhs);
}

GradientField BlendedMetric::gradient_field() const {
  return [this](const Vec& x) { return gradient(x); };
}

BlendedMetric blend_standard_metric(const ModelPtr& model, const Vec& xi,
                                    const std::vector<double>& radii, std::uint64_t seed,
                                    int samples_per_ball) {
  if (!model->has_fixed_points())
    throw NotAvailable("model '" + model->name() + "' has no fixed point enumeration");
  const auto fps = model->fixed_points();
  if (radii.size() != 1 && radii.size() != fps.size())
    throw InvalidArgument("need one radius per critical point (or a single radius)");
  auto radius_of = [&](std::size_t i) { return radii.size() == 1 ? radii[0] : radii[i]; };
  for (std::size_t i = 0; i < fps.size(); ++i) {
    if (!(radius_of(i) > 0)) throw InvalidArgument("radii must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (dist(fps[i].point, fps[j].point) <= radius_of(i) + radius_of(j))
        throw InvalidArgument("balls around distinct critical points overlap");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<BlendCenter> centers;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    auto chart = model->morse_chart(xi, fps[i].point);
    if (!chart) throw NotAvailable("no Morse coordinates for mu^xi at a critical point");
    BlendCenter c;
    c.point = fps[i].point;
    c.radius = radius_of(i);
    c.chart = std::move(*chart);

    // a_p from sampled lambda_min of g_p on the ball (Open Question: only an estimate).
    const Mat b0 = fps[i].tangent_basis;
    const auto d = b0.cols();
    double lam_min = INFINITY;
    for (int s = 0; s < samples_per_ball; ++s) {
      Vec w(d);
      for (auto& v : w) v = normal(rng);
      w *= c.radius * std::pow(unif(rng), 1.0 / static_cast<double>(d)) / w.norm();
      Vec x;
      try {
        x = model->project(c.point + b0 * w);
      } catch (const ConvergenceError&) {
        continue;
      }
      if (dist(x, c.point) > c.radius) continue;
      const Mat b = model->tangent_basis(x);
      const Mat jb = c.chart.jacobian(x) * b;
      Eigen::SelfAdjointEigenSolver<Mat> eig(jb.transpose() * jb, Eigen::EigenvaluesOnly);
      lam_min = std::min(lam_min, eig.eigenvalues()(0));
    }
    {
      const Mat jb = c.chart.jacobian(c.point) * b0;
      Eigen::SelfAdjointEigenSolver<Mat> eig(jb.transpose() * jb, Eigen::EigenvaluesOnly);
      lam_min = std::min(lam_min, eig.eigenvalues()(0));
    }
    if (!(lam_min > 0)) throw DegenerateError("Morse chart is singular inside the ball", lam_min);
    c.a_p_raw = std::max(1.0, 1.0 / lam_min);
    c.a_p = lam_min >= 1.0 ? 1.0 : 1.05 / lam_min;
    centers.push_back(std::move(c));
  }
  return BlendedMetric(model, xi, std::move(centers));
}

}  // namespace momentlab
