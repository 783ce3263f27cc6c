#pragma once

// Gradient flows on registry models, the unit-descent-speed flow, limits of
// flow lines, stable/unstable set membership by flow sampling, and the
// Palais-Smale diagnostic.

#include "momentlab/models.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace momentlab {

/// Smooth function on the ambient space; restricted to the model it gives f.
struct ScalarField {
  std::string name;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;  // ambient (Euclidean) gradient
  bool bounded_below = false;
};

/// mu^xi = <mu, xi> of a model.
ScalarField momentum_component(const ModelPtr& model, const Vec& xi);

/// Gradient of f for the induced metric: tangent projection of the ambient gradient.
Vec manifold_gradient(const ManifoldModel& model, const ScalarField& f, const Vec& x);

enum class FlowStatus { converged, max_time, left_domain, step_failure };

std::string to_string(FlowStatus s);

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<Vec> points;
  std::vector<double> f_values;
  std::vector<double> grad_norms;
  FlowStatus status = FlowStatus::max_time;

  const Vec& last() const { return points.back(); }
  double final_grad_norm() const { return grad_norms.back(); }
};

/// Tangent vector field replacing the induced-metric gradient (used with
/// blended metrics). Must return a tangent vector at on-manifold points.
using GradientField = std::function<Vec(const Vec&)>;

struct FlowOptions {
  double convergence_tol = 1e-8;   // ||grad f|| below this: converged
  double domain_radius = 1e8;      // ambient norm beyond this: left_domain
  bool ascend = false;             // flow +grad f instead of -grad f
  int max_halvings = 20;
  GradientField gradient;          // optional override
};

/// Fixed-step RK4 on x' = -grad f with reprojection after every step.
/// Step halving on projection failure; step_failure after max_halvings.
FlowTrajectory integrate_flow(const ManifoldModel& model, const ScalarField& f, const Vec& x0,
                              double t_end, double step = 1e-2, const FlowOptions& opt = {});

struct NormalizedFlowOptions {
  double delta = 1e-4;        // gradient-norm guard around critical points
  double local_tol = 1e-10;   // step-doubling error bound per step
  double domain_radius = 1e8;
};

/// x' = -grad f / ||grad f||^2, so f decreases at unit rate. Adaptive RK4
/// (step doubling) with `step` as the largest step. Status left_domain when
/// ||grad f|| < delta. Throws DegenerateError when started at such a point.
FlowTrajectory normalized_flow(const ManifoldModel& model, const ScalarField& f, const Vec& x0,
                               double t_end, double step = 1e-2,
                               const NormalizedFlowOptions& opt = {});

struct LimitResult {
  bool converged = false;
  Vec point;
  double time = 0.0;
  double grad_norm = 0.0;
  std::optional<FixedPointRecord> record;  // matched fixed point, if any
  std::optional<std::size_t> record_index;
};

/// Flows with doubling horizons 1, 2, 4, ... until converged or the total
/// time exceeds `budget`; matches the limit against fixed_points within 1e-6.
LimitResult limit_critical_point(const ManifoldModel& model, const ScalarField& f,
                                 const Vec& x0, double budget = 200.0,
                                 const FlowOptions& opt = {});

enum class Membership { member, not_member, indeterminate };

std::string to_string(Membership m);

/// Stable set: the descending flow from x converges to p (within 1e-5).
/// With unstable = true the ascending flow is used.
Membership stable_set_membership(const ManifoldModel& model, const ScalarField& f, const Vec& p,
                                 const Vec& x, double budget = 200.0, bool unstable = false);

struct PalaisSmaleReport {
  enum class Verdict { satisfied, satisfied_at_horizon, violated };
  Verdict verdict = Verdict::satisfied_at_horizon;
  std::vector<Vec> witness;
  std::vector<double> witness_grad_norms;
  std::size_t near_critical_terms = 0;
  double max_abs_f = 0.0;

  bool satisfied() const { return verdict != Verdict::violated; }
};

std::string to_string(PalaisSmaleReport::Verdict v);

/// Looks at x_1..x_horizon for terms with ||grad f|| < 1e-4. Violated when at
/// least three such terms are pairwise >= 0.1 apart with strictly increasing
/// norms (no accumulation, escaping every ball); satisfied when near-critical
/// terms exist but accumulate; satisfied_at_horizon when there are none.
PalaisSmaleReport palais_smale_diagnostic(const ManifoldModel& model, const ScalarField& f,
                                          const std::function<Vec(int)>& sequence,
                                          int horizon);

/// CSV: t, x1..xm, f, grad_norm.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

}  // namespace momentlab
