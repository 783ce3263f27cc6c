#include "momentlab/models.hpp"

#include "momentlab/error.hpp"
#include "momentlab/loop_group.hpp"

#include <cmath>
#include <set>

namespace momentlab {

Mat FixedPointRecord::hessian(const Vec& xi) const {
  if (xi.size() != static_cast<Eigen::Index>(component_hessians.size()))
    throw DimensionError("xi does not match the number of momentum components");
  const auto d = tangent_basis.cols();
  Mat h = Mat::Zero(d, d);
  for (std::size_t j = 0; j < component_hessians.size(); ++j)
    h += xi(static_cast<Eigen::Index>(j)) * component_hessians[j];
  return h;
}

ManifoldModel::ManifoldModel(std::string name, ParamList params, int ambient_dim,
                             int constraint_count, int action_dim)
    : name_(std::move(name)),
      params_(std::move(params)),
      ambient_dim_(ambient_dim),
      constraint_count_(constraint_count),
      action_dim_(action_dim) {}

Vec ManifoldModel::constraints(const Vec&) const { return Vec(0); }

Mat ManifoldModel::constraint_jacobian(const Vec&) const { return Mat(0, ambient_dim_); }

std::vector<Mat> ManifoldModel::constraint_hessians(const Vec&) const { return {}; }

Mat ManifoldModel::tangent_projector(const Vec& x) const {
  const Mat j = constraint_jacobian(x);
  const Mat id = Mat::Identity(ambient_dim_, ambient_dim_);
  if (j.rows() == 0) return id;
  const Mat jjt = j * j.transpose();
  return id - j.transpose() * jjt.ldlt().solve(j);
}

Mat ManifoldModel::tangent_basis(const Vec& x) const {
  return null_space(constraint_jacobian(x), ambient_dim_);
}

double ManifoldModel::omega(const Vec&, const Vec&, const Vec&) const {
  throw NotAvailable("model '" + name_ + "' has no registered symplectic form");
}

Mat ManifoldModel::omega_matrix(const Vec& x, const Mat& basis) const {
  const auto d = basis.cols();
  Mat w(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) w(i, j) = omega(x, basis.col(i), basis.col(j));
  return w;
}

Vec ManifoldModel::generator_field(const Vec& xi, const Vec& x) const {
  if (xi.size() != static_cast<Eigen::Index>(generators_.size()))
    throw DimensionError("xi does not match the action dimension");
  Vec v = Vec::Zero(ambient_dim_);
  for (std::size_t j = 0; j < generators_.size(); ++j)
    v += xi(static_cast<Eigen::Index>(j)) * (generators_[j] * x);
  return v;
}

Vec ManifoldModel::act(const Vec& xi, double t, const Vec& x) const {
  Mat l = Mat::Zero(ambient_dim_, ambient_dim_);
  for (std::size_t j = 0; j < generators_.size(); ++j)
    l += xi(static_cast<Eigen::Index>(j)) * generators_[j];
  return expm(t * l) * x;
}

std::vector<FixedPointRecord> ManifoldModel::fixed_points() const {
  throw NotAvailable("model '" + name_ + "' has no closed-form fixed point set");
}

double ManifoldModel::constraint_residual(const Vec& x) const {
  const Vec c = constraints(x);
  return c.size() ? c.norm() : 0.0;
}

Vec ManifoldModel::project(const Vec& x0) const {
  if (x0.size() != ambient_dim_) throw DimensionError("point has the wrong ambient dimension");
  if (constraint_count_ == 0) return x0;
  Vec x = x0;
  double res = 0.0;
  for (int iter = 0; iter < 50; ++iter) {
    if (!x.allFinite()) break;
    const Vec c = constraints(x);
    res = c.norm();
    if (res <= 1e-15 * std::max(1.0, x.norm())) return x;
    const Vec step = min_norm_solve(constraint_jacobian(x), c);
    x -= step;
    if (step.norm() <= 1e-16 * std::max(1.0, x.norm())) break;
  }
  res = x.allFinite() ? constraint_residual(x) : INFINITY;
  if (res > 1e-10) throw ConvergenceError("projection onto the manifold did not converge", res);
  return x;
}

std::optional<MorseChart> ManifoldModel::morse_chart(const Vec&, const Vec&) const {
  return std::nullopt;
}

FixedPointRecord ManifoldModel::make_record(const Vec& p) const {
  FixedPointRecord rec;
  rec.point = p;
  rec.mu_image = momentum(p);
  rec.tangent_basis = tangent_basis(p);
  const Mat& b = rec.tangent_basis;
  const Mat jc = constraint_jacobian(p);
  const auto hc = constraint_hessians(p);
  const Mat jmu = momentum_jacobian(p);
  for (int j = 0; j < action_dim_; ++j) {
    Mat h = momentum_hessian(p, j);
    if (jc.rows() > 0) {
      // Lagrange multipliers: grad mu_j = Jc^T lambda at a critical point.
      const Vec lambda = min_norm_solve(jc.transpose(), jmu.row(j).transpose());
      for (Eigen::Index i = 0; i < lambda.size(); ++i) h -= lambda(i) * hc[static_cast<std::size_t>(i)];
    }
    const Mat ht = b.transpose() * h * b;
    rec.component_hessians.push_back(0.5 * (ht + ht.transpose()));
  }
  if (hamiltonian() && has_action()) {
    const Mat w = omega_matrix(p, b);
    std::vector<Mat> gens;
    for (const Mat& l : generators_) gens.push_back(b.transpose() * l * b);
    const auto frame = build_frame(0.5 * (w - w.transpose()), Mat::Identity(b.cols(), b.cols()));
    rec.weights = isotropy_weights(frame, gens);
  }
  return rec;
}

double morse_quadratic(int d_plus, const Vec& x) {
  return x.head(d_plus).squaredNorm() - x.tail(x.size() - d_plus).squaredNorm();
}

namespace {

Mat rotation_generator_2d() {
  Mat r(2, 2);
  r << 0, -1, 1, 0;
  return r;
}

int int_param(const ParamList& params, const std::string& key, std::optional<int> fallback) {
  const auto it = params.find(key);
  if (it == params.end()) {
    if (!fallback) throw InvalidArgument("missing parameter '" + key + "'");
    return *fallback;
  }
  const double v = it->second;
  if (!std::isfinite(v) || std::round(v) != v)
    throw InvalidArgument("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

double real_param(const ParamList& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::string& model, const ParamList& params,
                const std::set<std::string>& allowed) {
  for (const auto& [k, v] : params)
    if (!allowed.count(k)) throw InvalidArgument("unknown parameter '" + k + "' for model " + model);
}

// ---------------------------------------------------------------------------

class MorseChartModel final : public ManifoldModel {
 public:
  MorseChartModel(ParamList params, int d_plus, int d_minus, double box)
      : ManifoldModel("morse-chart", std::move(params), d_plus + d_minus, 0, 1),
        d_plus_(d_plus),
        box_(box) {
    if (d_plus % 2 == 0 && d_minus % 2 == 0) {
      // Circle action rotating coordinate pairs with weight -2 on H_+ and +2
      // on H_-, whose momentum for the standard form is f itself.
      Mat l = Mat::Zero(ambient_dim(), ambient_dim());
      for (int i = 0; i + 1 < ambient_dim(); i += 2)
        l.block(i, i, 2, 2) = (i < d_plus ? -2.0 : 2.0) * rotation_generator_2d();
      generators_.push_back(l);
    }
  }

  bool hamiltonian() const override { return has_action(); }

  double omega(const Vec&, const Vec& u, const Vec& v) const override {
    if (!hamiltonian()) return ManifoldModel::omega(u, u, v);
    double acc = 0.0;
    for (int i = 0; i + 1 < ambient_dim(); i += 2) acc += u(i) * v(i + 1) - u(i + 1) * v(i);
    return acc;
  }

  Vec momentum(const Vec& x) const override {
    return Vec::Constant(1, morse_quadratic(d_plus_, x));
  }

  Mat momentum_jacobian(const Vec& x) const override {
    Mat j(1, ambient_dim());
    j.row(0) = 2.0 * x.transpose();
    j.rightCols(ambient_dim() - d_plus_) *= -1.0;
    return j;
  }

  Mat momentum_hessian(const Vec&, int) const override { return 2.0 * signature(); }

  bool has_fixed_points() const override { return true; }

  std::vector<FixedPointRecord> fixed_points() const override {
    return {make_record(Vec::Zero(ambient_dim()))};
  }

  Vec propose(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(-box_, box_);
    Vec x(ambient_dim());
    for (auto& v : x) v = u(rng);
    return x;
  }

  std::optional<MorseChart> morse_chart(const Vec& xi, const Vec& p) const override {
    if (xi.size() != 1 || xi(0) == 0.0 || p.norm() > 1e-12) return std::nullopt;
    const double s = std::sqrt(std::abs(xi(0)));
    MorseChart chart;
    chart.center = Vec::Zero(ambient_dim());
    chart.signs = (xi(0) > 0 ? 1.0 : -1.0) * signature().diagonal();
    chart.coords = [s](const Vec& x) { return Vec(s * x); };
    const auto m = ambient_dim();
    chart.jacobian = [s, m](const Vec&) { return Mat(s * Mat::Identity(m, m)); };
    return chart;
  }

 private:
  Mat signature() const {
    Mat d = Mat::Identity(ambient_dim(), ambient_dim());
    for (int i = d_plus_; i < ambient_dim(); ++i) d(i, i) = -1.0;
    return d;
  }

  int d_plus_;
  double box_;
};

// ---------------------------------------------------------------------------

class SphereProductModel : public ManifoldModel {
 public:
  SphereProductModel(std::string name, ParamList params, int factors)
      : ManifoldModel(std::move(name), std::move(params), 3 * factors, factors, factors),
        factors_(factors) {
    for (int i = 0; i < factors; ++i) {
      Mat l = Mat::Zero(ambient_dim(), ambient_dim());
      l.block(3 * i, 3 * i, 2, 2) = rotation_generator_2d();
      generators_.push_back(l);
    }
  }

  Vec constraints(const Vec& x) const override {
    Vec c(factors_);
    for (int i = 0; i < factors_; ++i) c(i) = x.segment<3>(3 * i).squaredNorm() - 1.0;
    return c;
  }

  Mat constraint_jacobian(const Vec& x) const override {
    Mat j = Mat::Zero(factors_, ambient_dim());
    for (int i = 0; i < factors_; ++i) j.block(i, 3 * i, 1, 3) = 2.0 * x.segment<3>(3 * i).transpose();
    return j;
  }

  std::vector<Mat> constraint_hessians(const Vec&) const override {
    std::vector<Mat> hs;
    for (int i = 0; i < factors_; ++i) {
      Mat h = Mat::Zero(ambient_dim(), ambient_dim());
      h.block(3 * i, 3 * i, 3, 3) = 2.0 * Mat::Identity(3, 3);
      hs.push_back(h);
    }
    return hs;
  }

  bool hamiltonian() const override { return true; }

  // Area form on each factor: omega_x(u, v) = x . (u x v).
  double omega(const Vec& x, const Vec& u, const Vec& v) const override {
    double acc = 0.0;
    for (int i = 0; i < factors_; ++i) {
      const Eigen::Vector3d xi = x.segment<3>(3 * i);
      const Eigen::Vector3d ui = u.segment<3>(3 * i);
      const Eigen::Vector3d vi = v.segment<3>(3 * i);
      acc += xi.dot(ui.cross(vi));
    }
    return acc;
  }

  Vec momentum(const Vec& x) const override {
    Vec mu(factors_);
    for (int i = 0; i < factors_; ++i) mu(i) = x(3 * i + 2);
    return mu;
  }

  Mat momentum_jacobian(const Vec&) const override {
    Mat j = Mat::Zero(factors_, ambient_dim());
    for (int i = 0; i < factors_; ++i) j(i, 3 * i + 2) = 1.0;
    return j;
  }

  Mat momentum_hessian(const Vec&, int) const override {
    return Mat::Zero(ambient_dim(), ambient_dim());
  }

  bool compact() const override { return true; }
  bool has_fixed_points() const override { return true; }

  std::vector<FixedPointRecord> fixed_points() const override {
    std::vector<FixedPointRecord> out;
    const int count = 1 << factors_;
    for (int mask = 0; mask < count; ++mask) {
      Vec p = Vec::Zero(ambient_dim());
      // Bit i set selects the south pole of factor i; mask 0 is all north.
      for (int i = 0; i < factors_; ++i) p(3 * i + 2) = (mask >> i) & 1 ? -1.0 : 1.0;
      out.push_back(make_record(p));
    }
    return out;
  }

  Vec propose(std::mt19937_64& rng) const override {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vec x(ambient_dim());
    for (auto& v : x) v = normal(rng);
    return x;
  }

  std::optional<MorseChart> morse_chart(const Vec& xi, const Vec& p) const override {
    if (xi.size() != factors_) return std::nullopt;
    Vec pole(factors_);
    for (int i = 0; i < factors_; ++i) {
      if (xi(i) == 0.0) return std::nullopt;
      if (std::abs(std::abs(p(3 * i + 2)) - 1.0) > 1e-9 || p.segment<2>(3 * i).norm() > 1e-9)
        return std::nullopt;
      pole(i) = p(3 * i + 2) > 0 ? 1.0 : -1.0;
    }
    // Near the pole s (= +-1) of a factor, x3 = s (1 - |y|^2) with
    // y = (x1, x2) / sqrt(1 + s x3), so xi x3 - xi s = -s xi |y|^2.
    MorseChart chart;
    chart.center = p;
    chart.signs.resize(2 * factors_);
    Vec scale(factors_);
    for (int i = 0; i < factors_; ++i) {
      scale(i) = std::sqrt(std::abs(xi(i)));
      const double sign = -pole(i) * (xi(i) > 0 ? 1.0 : -1.0);
      chart.signs(2 * i) = sign;
      chart.signs(2 * i + 1) = sign;
    }
    const int n = factors_;
    chart.coords = [pole, scale, n](const Vec& x) {
      Vec z(2 * n);
      for (int i = 0; i < n; ++i) {
        const double denom = std::sqrt(std::max(1.0 + pole(i) * x(3 * i + 2), 1e-300));
        z(2 * i) = scale(i) * x(3 * i) / denom;
        z(2 * i + 1) = scale(i) * x(3 * i + 1) / denom;
      }
      return z;
    };
    chart.jacobian = [pole, scale, n](const Vec& x) {
      Mat j = Mat::Zero(2 * n, 3 * n);
      for (int i = 0; i < n; ++i) {
        const double w = std::max(1.0 + pole(i) * x(3 * i + 2), 1e-300);
        const double inv = 1.0 / std::sqrt(w);
        const double d3 = -0.5 * pole(i) / (w * std::sqrt(w));
        for (int a = 0; a < 2; ++a) {
          j(2 * i + a, 3 * i + a) = scale(i) * inv;
          j(2 * i + a, 3 * i + 2) = scale(i) * x(3 * i + a) * d3;
        }
      }
      return j;
    };
    return chart;
  }

 private:
  int factors_;
};

// Sphere seen through h(x) = exp(i pi x3): a level w of h is the union of the
// x3-levels at every lift of arg(w) / pi in [-1, 1].
class HeightCircleMapModel final : public SphereProductModel {
 public:
  explicit HeightCircleMapModel(ParamList params)
      : SphereProductModel("height-circle-map", std::move(params), 1) {}

  bool circle_valued() const override { return true; }
  std::vector<Vec> level_lifts(const Vec& c) const override {
    double t = std::remainder(c(0), 2.0);  // representative in [-1, 1]
    if (std::abs(std::abs(t) - 1.0) <= 1e-12)
      return {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
    return {Vec::Constant(1, t)};
  }
};

// ---------------------------------------------------------------------------

// Coefficient space R^{6K} of the Fourier loop chart with mu = (p, E).
class LoopTruncationModel final : public ManifoldModel {
 public:
  LoopTruncationModel(ParamList params, int truncation, int grid, double sigma)
      : ManifoldModel("loop-truncation", std::move(params), 6 * truncation, 0, 2),
        truncation_(truncation),
        grid_(grid),
        sigma_(sigma) {
    Mat conj = Mat::Zero(ambient_dim(), ambient_dim());
    Mat rot = Mat::Zero(ambient_dim(), ambient_dim());
    Mat ad_h = Mat::Zero(3, 3);
    ad_h(0, 1) = -2.0;  // ad_H X = 2Y, ad_H Y = -2X
    ad_h(1, 0) = 2.0;
    for (int k = 1; k <= truncation; ++k) {
      const int a = 6 * (k - 1);
      const int b = a + 3;
      conj.block(a, a, 3, 3) = ad_h;
      conj.block(b, b, 3, 3) = ad_h;
      // d/dphi [xi(theta + phi) - xi(phi)] at phi = 0 maps (a, b) -> (-k b, k a).
      rot.block(a, b, 3, 3) = -k * Mat::Identity(3, 3);
      rot.block(b, a, 3, 3) = k * Mat::Identity(3, 3);
    }
    generators_ = {conj, rot};
  }

  Vec momentum(const Vec& x) const override {
    return loop::momentum_image(loop::loop_eval(loop::FourierLoop::from_coefficients(x, grid_)));
  }

  Mat momentum_jacobian(const Vec& x) const override {
    constexpr double h = 1e-6;
    Mat j(2, ambient_dim());
    for (int i = 0; i < ambient_dim(); ++i) {
      Vec xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      j.col(i) = (momentum(xp) - momentum(xm)) / (2.0 * h);
    }
    return j;
  }

  Mat momentum_hessian(const Vec& x, int component) const override {
    constexpr double h = 1e-4;
    const int m = ambient_dim();
    Mat hess(m, m);
    const double f0 = momentum(x)(component);
    for (int i = 0; i < m; ++i) {
      Vec xp = x, xm = x;
      xp(i) += h;
      xm(i) -= h;
      hess(i, i) = (momentum(xp)(component) - 2.0 * f0 + momentum(xm)(component)) / (h * h);
      for (int j = i + 1; j < m; ++j) {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp(i) += h; pp(j) += h;
        pm(i) += h; pm(j) -= h;
        mp(i) -= h; mp(j) += h;
        mm(i) -= h; mm(j) -= h;
        const double v = (momentum(pp)(component) - momentum(pm)(component) -
                          momentum(mp)(component) + momentum(mm)(component)) /
                         (4.0 * h * h);
        hess(i, j) = v;
        hess(j, i) = v;
      }
    }
    return hess;
  }

  // Inside the chart only the constant loop is fixed by the rotation action;
  // the homomorphism loops are supplied by loop::fixed_point_loops.
  bool has_fixed_points() const override { return true; }

  std::vector<FixedPointRecord> fixed_points() const override {
    return {make_record(Vec::Zero(ambient_dim()))};
  }

  Vec propose(std::mt19937_64& rng) const override {
    return loop::random_loop(truncation_, grid_, sigma_, rng).coefficients();
  }

 private:
  int truncation_;
  int grid_;
  double sigma_;
};

}  // namespace

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names = {"morse-chart", "sphere", "sphere-product",
                                                 "height-circle-map", "loop-truncation"};
  return names;
}

ModelPtr registry_get(const std::string& name, const ParamList& params) {
  if (name == "morse-chart") {
    check_keys(name, params, {"d_plus", "d_minus", "box"});
    const int dp = int_param(params, "d_plus", 1);
    const int dm = int_param(params, "d_minus", 1);
    const double box = real_param(params, "box", 2.0);
    if (dp < 0 || dm < 0) throw InvalidArgument("d_plus and d_minus must be nonnegative");
    if (dp + dm == 0) throw InvalidArgument("morse-chart needs d_plus + d_minus >= 1");
    if (!(box > 0)) throw InvalidArgument("box must be positive");
    return std::make_shared<MorseChartModel>(params, dp, dm, box);
  }
  if (name == "sphere") {
    check_keys(name, params, {});
    return std::make_shared<SphereProductModel>("sphere", params, 1);
  }
  if (name == "sphere-product") {
    check_keys(name, params, {"n"});
    const int n = int_param(params, "n", 2);
    if (n < 1) throw InvalidArgument("sphere-product needs n >= 1");
    if (n > 10) throw InvalidArgument("sphere-product supports n <= 10");
    return std::make_shared<SphereProductModel>("sphere-product", params, n);
  }
  if (name == "height-circle-map") {
    check_keys(name, params, {});
    return std::make_shared<HeightCircleMapModel>(params);
  }
  if (name == "loop-truncation") {
    check_keys(name, params, {"K", "grid", "sigma"});
    const int k = int_param(params, "K", 1);
    const int grid = int_param(params, "grid", 64);
    const double sigma = real_param(params, "sigma", 0.3);
    if (k < 1) throw InvalidArgument("loop-truncation needs K >= 1");
    if (grid < 8 * k) throw InvalidArgument("loop-truncation needs grid >= 8K");
    if (!(sigma >= 0)) throw InvalidArgument("sigma must be nonnegative");
    return std::make_shared<LoopTruncationModel>(params, k, grid, sigma);
  }
  throw NotAvailable("unknown model '" + name + "'");
}

std::vector<Vec> sample_manifold(const ManifoldModel& model, int count, std::mt19937_64& rng) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < 10 * count + 100) {
    ++attempts;
    const Vec x = model.propose(rng);
    try {
      out.push_back(model.project(x));
    } catch (const ConvergenceError&) {
    }
  }
  return out;
}

}  // namespace momentlab
