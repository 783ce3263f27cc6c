#pragma once

// Metric blending that makes -grad f standard near each critical point:
// g_new = (1 - kappa_p) g + a_p kappa_p g_p, with g_p the pullback of the
// flat metric in Morse coordinates and kappa_p a quintic smoothstep bump.

#include "momentlab/flow.hpp"
#include "momentlab/models.hpp"

#include <vector>

namespace momentlab {

struct BlendCenter {
  Vec point;
  double radius = 0.0;
  double a_p = 1.0;       // norm-comparison constant (sampled estimate, with margin)
  double a_p_raw = 1.0;   // sup over samples of 1 / lambda_min(g_p), before margin
  MorseChart chart;
};

class BlendedMetric {
 public:
  BlendedMetric(ModelPtr model, Vec xi, std::vector<BlendCenter> centers);

  const std::vector<BlendCenter>& centers() const { return centers_; }
  const ManifoldModel& model() const { return *model_; }

  /// Quintic smoothstep: 1 for d <= r / 2, 0 for d >= r (ambient distance).
  double kappa(std::size_t i, const Vec& x) const;

  /// Ambient symmetric matrix whose restriction to T_x M is g_new.
  Mat metric(const Vec& x) const;

  double norm(const Vec& x, const Vec& v) const;

  /// Gradient of mu^xi for g_new, as a tangent vector.
  Vec gradient(const Vec& x) const;

  /// GradientField for integrate_flow.
  GradientField gradient_field() const;

 private:
  ModelPtr model_;
  Vec xi_;
  ScalarField f_;
  std::vector<BlendCenter> centers_;
};

/// Quintic smoothstep S(s) = 6 s^5 - 15 s^4 + 10 s^3 clamped to [0, 1].
double smoothstep5(double s);

/// Builds the blended metric for f = mu^xi around every fixed point, with one
/// radius per fixed point (or a single radius for all). Throws InvalidArgument
/// on overlapping balls and NotAvailable when Morse coordinates are unknown.
BlendedMetric blend_standard_metric(const ModelPtr& model, const Vec& xi,
                                    const std::vector<double>& radii,
                                    std::uint64_t seed = 7, int samples_per_ball = 400);

}  // namespace momentlab
