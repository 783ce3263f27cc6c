#include "momentlab/flow.hpp"

#include "momentlab/error.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace momentlab {

ScalarField momentum_component(const ModelPtr& model, const Vec& xi) {
  if (xi.size() != model->action_dim()) throw DimensionError("xi does not match the action dimension");
  ScalarField f;
  f.name = "mu^xi";
  f.value = [model, xi](const Vec& x) { return model->momentum(x).dot(xi); };
  f.gradient = [model, xi](const Vec& x) {
    return Vec(model->momentum_jacobian(x).transpose() * xi);
  };
  // compact models and the positive definite morse chart
  f.bounded_below = model->constraint_count() > 0 || model->name() == "loop-truncation";
  if (model->name() == "morse-chart") {
    const auto& p = model->params();
    const auto it = p.find("d_minus");
    const double dm = it == p.end() ? 1.0 : it->second;
    f.bounded_below = dm == 0.0 && xi(0) >= 0.0;
  }
  return f;
}

Vec manifold_gradient(const ManifoldModel& model, const ScalarField& f, const Vec& x) {
  const Vec g = f.gradient(x);
  if (model.constraint_count() == 0) return g;
  return model.tangent_projector(x) * g;
}

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_time: return "max_time";
    case FlowStatus::left_domain: return "left_domain";
    case FlowStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::not_member: return "not_member";
    case Membership::indeterminate: return "indeterminate";
  }
  return "unknown";
}

std::string to_string(PalaisSmaleReport::Verdict v) {
  switch (v) {
    case PalaisSmaleReport::Verdict::satisfied: return "satisfied";
    case PalaisSmaleReport::Verdict::satisfied_at_horizon: return "satisfied_at_horizon";
    case PalaisSmaleReport::Verdict::violated: return "violated";
  }
  return "unknown";
}

namespace {

void check_start(const ManifoldModel& model, const Vec& x0) {
  if (x0.size() != model.ambient_dim()) throw DimensionError("start point has the wrong dimension");
  if (model.constraint_residual(x0) > 1e-8)
    throw InvalidArgument("start point is not on the manifold");
}

template <class Field>
Vec rk4(const Field& v, const Vec& x, double h) {
  const Vec k1 = v(x);
  const Vec k2 = v(x + 0.5 * h * k1);
  const Vec k3 = v(x + 0.5 * h * k2);
  const Vec k4 = v(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

FlowTrajectory integrate_flow(const ManifoldModel& model, const ScalarField& f, const Vec& x0,
                              double t_end, double step, const FlowOptions& opt) {
  if (!(step > 0)) throw InvalidArgument("step must be positive");
  if (!(t_end >= 0)) throw InvalidArgument("t_end must be nonnegative");
  check_start(model, x0);

  auto grad = [&](const Vec& x) {
    return opt.gradient ? opt.gradient(x) : manifold_gradient(model, f, x);
  };
  const double sign = opt.ascend ? 1.0 : -1.0;
  auto field = [&](const Vec& x) { return Vec(sign * grad(x)); };

  FlowTrajectory tr;
  auto record = [&](double t, const Vec& x, double gn) {
    tr.times.push_back(t);
    tr.points.push_back(x);
    tr.f_values.push_back(f.value(x));
    tr.grad_norms.push_back(gn);
  };

  Vec x = x0;
  double t = 0.0;
  double gn = grad(x).norm();
  record(t, x, gn);
  if (gn < opt.convergence_tol) {
    tr.status = FlowStatus::converged;
    return tr;
  }
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  while (t < t_end - t_eps) {
    double h = std::min(step, t_end - t);
    bool ok = false;
    Vec next;
    for (int halving = 0; halving <= opt.max_halvings; ++halving) {
      try {
        next = model.project(rk4(field, x, h));
        ok = next.allFinite();
      } catch (const ConvergenceError&) {
        ok = false;
      }
      if (ok) break;
      h *= 0.5;
    }
    if (!ok) {
      tr.status = FlowStatus::step_failure;
      return tr;
    }
    x = next;
    // land exactly on t_end when the last step was not shortened
    t = (std::abs(t + h - t_end) <= t_eps) ? t_end : t + h;
    gn = grad(x).norm();
    record(t, x, gn);
    if (x.norm() > opt.domain_radius) {
      tr.status = FlowStatus::left_domain;
      return tr;
    }
    if (gn < opt.convergence_tol) {
      tr.status = FlowStatus::converged;
      return tr;
    }
  }
  tr.status = FlowStatus::max_time;
  return tr;
}

FlowTrajectory normalized_flow(const ManifoldModel& model, const ScalarField& f, const Vec& x0,
                               double t_end, double step, const NormalizedFlowOptions& opt) {
  if (!(step > 0)) throw InvalidArgument("step must be positive");
  if (!(t_end >= 0)) throw InvalidArgument("t_end must be nonnegative");
  check_start(model, x0);

  FlowTrajectory tr;
  auto record = [&](double t, const Vec& x, double gn) {
    tr.times.push_back(t);
    tr.points.push_back(x);
    tr.f_values.push_back(f.value(x));
    tr.grad_norms.push_back(gn);
  };

  double gn0 = manifold_gradient(model, f, x0).norm();
  if (gn0 < opt.delta)
    throw DegenerateError("normalized flow started within the critical tube", gn0);
  record(0.0, x0, gn0);

  // The field blows up near critical points; evaluations inside the tube are
  // flagged so the step is rejected and the run ends with left_domain.
  bool hit_tube = false;
  auto field = [&](const Vec& x) -> Vec {
    const Vec g = manifold_gradient(model, f, x);
    const double n2 = g.squaredNorm();
    if (std::sqrt(n2) < opt.delta || !std::isfinite(n2)) {
      hit_tube = true;
      return Vec::Zero(x.size());
    }
    return -g / n2;
  };

  Vec x = x0;
  double t = 0.0;
  double h = step;
  const double t_eps = 1e-12 * std::max(1.0, t_end);
  const double h_min = 1e-12;
  while (t < t_end - t_eps) {
    h = std::min(h, t_end - t);
    hit_tube = false;
    const Vec full = rk4(field, x, h);
    const Vec half = rk4(field, rk4(field, x, 0.5 * h), 0.5 * h);
    if (hit_tube) {
      if (h > h_min) {
        h *= 0.5;
        continue;
      }
      tr.status = FlowStatus::left_domain;
      return tr;
    }
    const double err = (half - full).norm() / 15.0;
    if (err > opt.local_tol && h > h_min) {
      h *= std::max(0.2, 0.9 * std::pow(opt.local_tol / err, 0.2));
      continue;
    }
    Vec next;
    try {
      next = model.project(half + (half - full) / 15.0);
    } catch (const ConvergenceError&) {
      if (h > h_min) {
        h *= 0.5;
        continue;
      }
      tr.status = FlowStatus::step_failure;
      return tr;
    }
    x = next;
    t = (std::abs(t + h - t_end) <= t_eps) ? t_end : t + h;
    const double gn = manifold_gradient(model, f, x).norm();
    record(t, x, gn);
    if (gn < opt.delta) {
      tr.status = FlowStatus::left_domain;
      return tr;
    }
    if (x.norm() > opt.domain_radius) {
      tr.status = FlowStatus::left_domain;
      return tr;
    }
    if (err > 0) h = std::min(step, h * std::min(2.0, 0.9 * std::pow(opt.local_tol / err, 0.2)));
    else h = std::min(step, 2.0 * h);
  }
  tr.status = FlowStatus::max_time;
  return tr;
}

LimitResult limit_critical_point(const ManifoldModel& model, const ScalarField& f, const Vec& x0,
                                 double budget, const FlowOptions& opt) {
  LimitResult out;
  Vec x = x0;
  double used = 0.0;
  double horizon = 1.0;
  FlowTrajectory tr;
  while (true) {
    const double span = std::min(horizon, budget - used);
    tr = integrate_flow(model, f, x, span, 1e-2, opt);
    used += tr.times.back();
    x = tr.last();
    if (tr.status == FlowStatus::converged) {
      out.converged = true;
      break;
    }
    if (tr.status != FlowStatus::max_time || used >= budget - 1e-12) break;
    horizon *= 2.0;
  }
  out.point = x;
  out.time = used;
  out.grad_norm = tr.final_grad_norm();
  if (out.converged && model.has_fixed_points()) {
    const auto fps = model.fixed_points();
    for (std::size_t i = 0; i < fps.size(); ++i) {
      if (dist(fps[i].point, x) <= 1e-6) {
        out.record = fps[i];
        out.record_index = i;
        break;
      }
    }
  }
  return out;
}

Membership stable_set_membership(const ManifoldModel& model, const ScalarField& f, const Vec& p,
                                 const Vec& x, double budget, bool unstable) {
  if (manifold_gradient(model, f, p).norm() > 1e-8)
    throw InvalidArgument("p is not a critical point");
  if (dist(p, x) <= 1e-12) return Membership::member;
  FlowOptions opt;
  opt.ascend = unstable;
  const LimitResult lim = limit_critical_point(model, f, x, budget, opt);
  if (!lim.converged) return Membership::indeterminate;
  return dist(lim.point, p) <= 1e-5 ? Membership::member : Membership::not_member;
}

PalaisSmaleReport palais_smale_diagnostic(const ManifoldModel& model, const ScalarField& f,
                                          const std::function<Vec(int)>& sequence, int horizon) {
  constexpr double kGradTol = 1e-4;
  constexpr double kSeparation = 0.1;
  PalaisSmaleReport rep;
  std::vector<Vec> near;
  std::vector<double> norms;
  for (int n = 1; n <= horizon; ++n) {
    const Vec x = sequence(n);
    rep.max_abs_f = std::max(rep.max_abs_f, std::abs(f.value(x)));
    const double g = manifold_gradient(model, f, x).norm();
    if (g < kGradTol) {
      near.push_back(x);
      norms.push_back(g);
    }
  }
  rep.near_critical_terms = near.size();
  if (near.empty()) {
    rep.verdict = PalaisSmaleReport::Verdict::satisfied_at_horizon;
    return rep;
  }
  bool escaping = near.size() >= 3;
  for (std::size_t i = 0; escaping && i < near.size(); ++i) {
    if (i > 0 && near[i].norm() <= near[i - 1].norm()) escaping = false;
    for (std::size_t j = 0; escaping && j < i; ++j)
      if (dist(near[i], near[j]) < kSeparation) escaping = false;
  }
  if (escaping) {
    rep.verdict = PalaisSmaleReport::Verdict::violated;
    rep.witness = near;
    rep.witness_grad_norms = norms;
  } else {
    rep.verdict = PalaisSmaleReport::Verdict::satisfied;
  }
  return rep;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  const auto m = traj.points.empty() ? 0 : traj.points.front().size();
  out << "t";
  for (Eigen::Index i = 0; i < m; ++i) out << ",x" << (i + 1);
  out << ",f,grad_norm\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    out << traj.times[k];
    for (Eigen::Index i = 0; i < m; ++i) out << ',' << traj.points[k](i);
    out << ',' << traj.f_values[k] << ',' << traj.grad_norms[k] << '\n';
  }
}

}  // namespace momentlab
