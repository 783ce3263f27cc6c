#pragma once

// Registry of embedded manifolds with linear torus actions and closed-form
// momentum maps. Points are ambient coordinates; the metric is the induced
// Euclidean one; tangent spaces are described by orthonormal bases.

#include "momentlab/linalg.hpp"
#include "momentlab/symplectic.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace momentlab {

using ParamList = std::map<std::string, double>;

/// A critical point of the momentum map (fixed point of the action).
struct FixedPointRecord {
  Vec point;
  Vec mu_image;
  Mat tangent_basis;                 // m x d, orthonormal columns
  std::vector<Mat> component_hessians;  // Hessian of mu_j on the tangent space, d x d
  std::optional<IsotropyWeights> weights;

  /// Hessian of mu^xi = <mu, xi> on the tangent space.
  Mat hessian(const Vec& xi) const;
};

/// Coordinates z around a critical point p of mu^xi with
/// mu^xi(x) - mu^xi(p) = sum_i signs_i z_i(x)^2.
struct MorseChart {
  Vec center;
  Vec signs;
  std::function<Vec(const Vec&)> coords;
  std::function<Mat(const Vec&)> jacobian;  // d x m, ambient derivative
};

class ManifoldModel {
 public:
  virtual ~ManifoldModel() = default;

  const std::string& name() const { return name_; }
  const ParamList& params() const { return params_; }
  int ambient_dim() const { return ambient_dim_; }
  int constraint_count() const { return constraint_count_; }
  int dimension() const { return ambient_dim_ - constraint_count_; }
  /// Number of momentum components n.
  int action_dim() const { return action_dim_; }

  virtual Vec constraints(const Vec& x) const;
  virtual Mat constraint_jacobian(const Vec& x) const;
  virtual std::vector<Mat> constraint_hessians(const Vec& x) const;

  Mat tangent_projector(const Vec& x) const;
  Mat tangent_basis(const Vec& x) const;

  /// Whether omega is registered and dmu^xi = iota(X_xi) omega holds.
  virtual bool hamiltonian() const { return false; }
  virtual double omega(const Vec& x, const Vec& u, const Vec& v) const;
  /// omega restricted to span(basis): entries omega(b_i, b_j).
  Mat omega_matrix(const Vec& x, const Mat& basis) const;

  /// Ambient matrices L_j with X_xi(x) = sum_j xi_j L_j x. Empty when the
  /// model carries no torus action.
  const std::vector<Mat>& generators() const { return generators_; }
  bool has_action() const { return !generators_.empty(); }
  Vec generator_field(const Vec& xi, const Vec& x) const;
  /// exp(t xi) . x
  Vec act(const Vec& xi, double t, const Vec& x) const;

  virtual Vec momentum(const Vec& x) const = 0;
  virtual Mat momentum_jacobian(const Vec& x) const = 0;  // n x m
  virtual Mat momentum_hessian(const Vec& x, int component) const = 0;  // m x m

  virtual bool has_fixed_points() const { return false; }
  /// Compact manifold: the momentum image is the hull of the fixed images.
  virtual bool compact() const { return false; }
  /// Closed-form fixed set with mu images and tangent Hessians.
  virtual std::vector<FixedPointRecord> fixed_points() const;

  /// Newton iteration (minimum-norm steps) onto the constraint zero set.
  /// Residual <= 1e-10 within 50 iterations or ConvergenceError.
  Vec project(const Vec& x) const;
  double constraint_residual(const Vec& x) const;

  /// Random ambient proposal for on-manifold sampling.
  virtual Vec propose(std::mt19937_64& rng) const = 0;

  /// Lifts of a level value to values of the real momentum (identity except
  /// for circle-valued maps).
  virtual std::vector<Vec> level_lifts(const Vec& c) const { return {c}; }
  /// Momentum values live on R / 2Z (period 2) rather than R.
  virtual bool circle_valued() const { return false; }

  /// Morse coordinates for mu^xi at a fixed point, when known in closed form.
  virtual std::optional<MorseChart> morse_chart(const Vec& xi, const Vec& p) const;

  /// Builds a FixedPointRecord at p from the closed-form derivatives.
  FixedPointRecord make_record(const Vec& p) const;

 protected:
  ManifoldModel(std::string name, ParamList params, int ambient_dim, int constraint_count,
                int action_dim);
  std::vector<Mat> generators_;

 private:
  std::string name_;
  ParamList params_;
  int ambient_dim_;
  int constraint_count_;
  int action_dim_;
};

using ModelPtr = std::shared_ptr<const ManifoldModel>;

/// Names accepted by registry_get.
const std::vector<std::string>& registry_names();

/// Instantiates a registry model:
///   morse-chart        d_plus, d_minus (ints >= 0, not both 0), box (default 2)
///   sphere
///   sphere-product     n >= 1
///   height-circle-map
///   loop-truncation    K >= 1, grid (default 64), sigma (default 0.3)
/// Throws NotAvailable for unknown names, InvalidArgument for bad params.
ModelPtr registry_get(const std::string& name, const ParamList& params = {});

/// Morse-chart normal form f(x) = |x_+|^2 - |x_-|^2.
double morse_quadratic(int d_plus, const Vec& x);

/// Uniform random points on the model (proposal + projection), reproducible by rng.
std::vector<Vec> sample_manifold(const ManifoldModel& model, int count, std::mt19937_64& rng);

}  // namespace momentlab
