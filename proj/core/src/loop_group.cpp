#include "momentlab/loop_group.hpp"

#include "momentlab/error.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <iomanip>
#include <ostream>
#include <numbers>
#include <string>

namespace momentlab::loop {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frequency(int m, int n) {
  if (2 * m == n) return 0.0;  // Nyquist mode carries no derivative
  return 2 * m < n ? m : m - n;
}

std::vector<cd> spectral_derivative_complex(const std::vector<cd>& x) {
  const int n = static_cast<int>(x.size());
  Eigen::FFT<double> fft;
  std::vector<cd> coef;
  fft.fwd(coef, x);
  for (int m = 0; m < n; ++m) coef[m] *= cd(0.0, frequency(m, n));
  std::vector<cd> out;
  fft.inv(out, coef);
  return out;
}

// Spectral coefficients of a periodic complex sequence.
std::vector<cd> forward(const std::vector<cd>& x) {
  Eigen::FFT<double> fft;
  std::vector<cd> coef;
  fft.fwd(coef, x);
  return coef;
}

// Evaluates the trigonometric interpolant shifted by phi on the grid.
std::vector<cd> shifted(const std::vector<cd>& coef, double phi) {
  const int n = static_cast<int>(coef.size());
  std::vector<cd> s(coef);
  for (int m = 0; m < n; ++m) {
    if (2 * m == n)
      s[m] *= std::cos(0.5 * n * phi);
    else
      s[m] *= std::exp(cd(0.0, frequency(m, n) * phi));
  }
  Eigen::FFT<double> fft;
  std::vector<cd> out;
  fft.inv(out, s);
  return out;
}

cd interpolate_at(const std::vector<cd>& coef, double theta) {
  const int n = static_cast<int>(coef.size());
  cd acc = 0.0;
  for (int m = 0; m < n; ++m) {
    if (2 * m == n)
      acc += coef[m] * std::cos(0.5 * n * theta);
    else
      acc += coef[m] * std::exp(cd(0.0, frequency(m, n) * theta));
  }
  return acc / static_cast<double>(n);
}

}  // namespace

Eigen::Matrix2cd to_matrix(const Algebra& u) {
  Eigen::Matrix2cd m;
  m << cd(0.0, u(2)), cd(u(0), u(1)), cd(-u(0), u(1)), cd(0.0, -u(2));
  return m;
}

Algebra from_matrix(const Eigen::Matrix2cd& m) {
  // Projection onto su(2) in the {X, Y, H} basis (exact for traceless skew-Hermitian m).
  const cd top = 0.5 * (m(0, 1) - std::conj(m(1, 0)));
  const double h = 0.5 * (m(0, 0).imag() - m(1, 1).imag());
  return {top.real(), top.imag(), h};
}

SU2 exp_su2(const Algebra& u) {
  const double r = u.norm();
  const double sinc = r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r;
  return std::cos(r) * SU2::Identity() + sinc * to_matrix(u);
}

FourierLoop FourierLoop::constant(int truncation, int grid_n) {
  FourierLoop l;
  l.truncation = truncation;
  l.a.assign(static_cast<std::size_t>(truncation), Algebra::Zero());
  l.b.assign(static_cast<std::size_t>(truncation), Algebra::Zero());
  l.grid_n = grid_n;
  return l;
}

FourierLoop FourierLoop::from_coefficients(const Eigen::VectorXd& c, int grid_n) {
  if (c.size() % 6 != 0 || c.size() == 0)
    throw DimensionError("loop coefficient vector must have length 6K, K >= 1");
  FourierLoop l = constant(static_cast<int>(c.size() / 6), grid_n);
  for (int k = 0; k < l.truncation; ++k) {
    l.a[k] = c.segment<3>(6 * k);
    l.b[k] = c.segment<3>(6 * k + 3);
  }
  return l;
}

Eigen::VectorXd FourierLoop::coefficients() const {
  Eigen::VectorXd c(6 * truncation);
  for (int k = 0; k < truncation; ++k) {
    c.segment<3>(6 * k) = a[k];
    c.segment<3>(6 * k + 3) = b[k];
  }
  return c;
}

Algebra FourierLoop::path(double theta) const {
  Algebra xi = Algebra::Zero();
  for (int k = 1; k <= truncation; ++k)
    xi += a[k - 1] * std::sin(k * theta) + b[k - 1] * (std::cos(k * theta) - 1.0);
  return xi;
}

LoopSamples loop_eval(const FourierLoop& loop) {
  if (loop.truncation < 0 || static_cast<int>(loop.a.size()) != loop.truncation ||
      static_cast<int>(loop.b.size()) != loop.truncation)
    throw DimensionError("inconsistent Fourier loop");
  if (loop.grid_n < 8 * std::max(loop.truncation, 1))
    throw InvalidArgument("grid_n = " + std::to_string(loop.grid_n) +
                          " does not resolve K = " + std::to_string(loop.truncation) +
                          " (need grid_n >= 8K)");
  LoopSamples out;
  out.values.reserve(static_cast<std::size_t>(loop.grid_n));
  for (int i = 0; i < loop.grid_n; ++i)
    out.values.push_back(exp_su2(loop.path(kTwoPi * i / loop.grid_n)));
  return out;
}

LoopSamples homomorphism_loop(int k, int grid_n) {
  if (grid_n < 8) throw InvalidArgument("grid_n must be at least 8");
  LoopSamples out;
  out.values.reserve(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    // exp(k theta H) = diag(e^{i k theta}, e^{-i k theta}); reduce the angle
    // modulo 2 pi in integer arithmetic so gamma(0) = gamma(2 pi) exactly.
    const double angle = kTwoPi * static_cast<double>((static_cast<long>(k) * i) % grid_n) / grid_n;
    SU2 g = SU2::Zero();
    g(0, 0) = std::exp(cd(0.0, angle));
    g(1, 1) = std::exp(cd(0.0, -angle));
    out.values.push_back(g);
  }
  return out;
}

AlgebraPath spectral_derivative(const AlgebraPath& path) {
  const std::size_t n = path.size();
  AlgebraPath out(n, Algebra::Zero());
  // Two real components per complex transform.
  std::vector<cd> xy(n), h(n);
  for (std::size_t i = 0; i < n; ++i) {
    xy[i] = cd(path[i](0), path[i](1));
    h[i] = cd(path[i](2), 0.0);
  }
  const auto dxy = spectral_derivative_complex(xy);
  const auto dh = spectral_derivative_complex(h);
  for (std::size_t i = 0; i < n; ++i) out[i] = Algebra(dxy[i].real(), dxy[i].imag(), dh[i].real());
  return out;
}

namespace {

// gamma' on the grid, from spectral derivatives of the entries alpha, beta of
// gamma = [[alpha, beta], [-conj beta, conj alpha]].
std::vector<SU2> grid_derivative(const LoopSamples& loop) {
  const std::size_t n = loop.values.size();
  std::vector<cd> alpha(n), beta(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = loop.values[i](0, 0);
    beta[i] = loop.values[i](0, 1);
  }
  const auto da = spectral_derivative_complex(alpha);
  const auto db = spectral_derivative_complex(beta);
  std::vector<SU2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] << da[i], db[i], -std::conj(db[i]), std::conj(da[i]);
  return out;
}

}  // namespace

AlgebraPath log_derivative(const LoopSamples& loop) {
  const auto dg = grid_derivative(loop);
  AlgebraPath out(dg.size());
  for (std::size_t i = 0; i < dg.size(); ++i) out[i] = from_matrix(loop.values[i].adjoint() * dg[i]);
  return out;
}

AlgebraPath right_log_derivative(const LoopSamples& loop) {
  const auto dg = grid_derivative(loop);
  AlgebraPath out(dg.size());
  for (std::size_t i = 0; i < dg.size(); ++i) out[i] = from_matrix(dg[i] * loop.values[i].adjoint());
  return out;
}

Eigen::Vector2d momentum_image(const LoopSamples& loop) {
  // |gamma' gamma^-1| = |gamma^-1 gamma'|, so one derivative serves both.
  const auto u = right_log_derivative(loop);
  double e = 0.0;
  double p = 0.0;
  for (const auto& v : u) {
    e += v.squaredNorm();
    p += v(2);
  }
  const double n = static_cast<double>(u.size());
  return {p / n, 0.5 * e / n};
}

double energy(const LoopSamples& loop) { return momentum_image(loop)(1); }

double momentum_t(const LoopSamples& loop) { return momentum_image(loop)(0); }

double loop_symplectic_form(const AlgebraPath& gamma_tan, const AlgebraPath& eta_tan) {
  if (gamma_tan.size() != eta_tan.size() || gamma_tan.empty())
    throw DimensionError("tangent paths must share a nonempty grid");
  const auto dg = spectral_derivative(gamma_tan);
  double acc = 0.0;
  for (std::size_t i = 0; i < dg.size(); ++i) acc += dg[i].dot(eta_tan[i]);
  return acc / static_cast<double>(dg.size());
}

double h1_inner_product(const AlgebraPath& gamma_tan, const AlgebraPath& eta_tan) {
  if (gamma_tan.size() != eta_tan.size() || gamma_tan.empty())
    throw DimensionError("tangent paths must share a nonempty grid");
  const auto dg = spectral_derivative(gamma_tan);
  const auto de = spectral_derivative(eta_tan);
  double acc = 0.0;
  for (std::size_t i = 0; i < dg.size(); ++i)
    acc += gamma_tan[i].dot(eta_tan[i]) + dg[i].dot(de[i]);
  return acc / static_cast<double>(dg.size());
}

AlgebraPath tangent_path(const Eigen::VectorXd& coefficients, int grid_n) {
  const FourierLoop l = FourierLoop::from_coefficients(coefficients, grid_n);
  AlgebraPath out(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) out[i] = l.path(kTwoPi * i / grid_n);
  return out;
}

LoopSamples rotate_loop(double phi, const LoopSamples& loop) {
  const int n = loop.grid_n();
  if (n == 0) return loop;
  const double h = kTwoPi / n;
  const double steps = phi / h;
  const double nearest = std::round(steps);
  LoopSamples out;
  out.values.resize(static_cast<std::size_t>(n));
  if (std::abs(steps - nearest) <= 1e-12 * std::max(1.0, std::abs(steps))) {
    const long shift = ((static_cast<long>(nearest) % n) + n) % n;
    const SU2 g_phi_inv = loop.values[static_cast<std::size_t>(shift)].inverse();
    for (int i = 0; i < n; ++i)
      out.values[i] = loop.values[static_cast<std::size_t>((i + shift) % n)] * g_phi_inv;
    return out;
  }
  std::vector<std::vector<cd>> coef(4);
  std::vector<std::vector<cd>> moved(4);
  SU2 g_phi;
  for (int e = 0; e < 4; ++e) {
    std::vector<cd> entry(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) entry[i] = loop.values[i](e / 2, e % 2);
    coef[e] = forward(entry);
    moved[e] = shifted(coef[e], phi);
    g_phi(e / 2, e % 2) = interpolate_at(coef[e], phi);
  }
  const SU2 g_phi_inv = g_phi.inverse();
  for (int i = 0; i < n; ++i) {
    SU2 g;
    g << moved[0][i], moved[1][i], moved[2][i], moved[3][i];
    out.values[i] = g * g_phi_inv;
  }
  return out;
}

LoopSamples conjugate_loop(double t_param, const LoopSamples& loop) {
  const SU2 t = exp_su2(Algebra(0.0, 0.0, t_param));
  const SU2 t_inv = t.adjoint();
  LoopSamples out;
  out.values.reserve(loop.values.size());
  for (const auto& g : loop.values) out.values.push_back(t * g * t_inv);
  return out;
}

double unitarity_defect(const LoopSamples& loop) {
  double worst = 0.0;
  for (const auto& g : loop.values) {
    worst = std::max(worst, (g.adjoint() * g - SU2::Identity()).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(g.determinant() - 1.0));
  }
  return worst;
}

std::vector<FixedLoop> fixed_point_loops(int truncation, int grid_n) {
  if (truncation < 1) throw InvalidArgument("K must be at least 1");
  std::vector<FixedLoop> out;
  const double probes[] = {kTwoPi / grid_n * 3.0, 0.7310, 2.0 * std::numbers::pi / 3.0};
  for (int k = -truncation; k <= truncation; ++k) {
    FixedLoop f;
    f.k = k;
    f.loop = homomorphism_loop(k, grid_n);
    double defect = 0.0;
    for (double phi : probes) {
      const auto r = rotate_loop(phi, f.loop);
      const auto c = conjugate_loop(phi, f.loop);
      for (int i = 0; i < grid_n; ++i) {
        defect = std::max(defect, (r.values[i] - f.loop.values[i]).cwiseAbs().maxCoeff());
        defect = std::max(defect, (c.values[i] - f.loop.values[i]).cwiseAbs().maxCoeff());
      }
    }
    if (defect > 1e-10)
      throw ConvergenceError("homomorphism loop k=" + std::to_string(k) + " is not fixed", defect);
    f.image = momentum_image(f.loop);
    out.push_back(std::move(f));
  }
  return out;
}

FourierLoop random_loop(int truncation, int grid_n, double sigma, std::mt19937_64& rng) {
  FourierLoop l = FourierLoop::constant(truncation, grid_n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 1; k <= truncation; ++k) {
    const double scale = sigma / (static_cast<double>(k) * k);
    for (int c = 0; c < 3; ++c) l.a[k - 1](c) = scale * normal(rng);
    for (int c = 0; c < 3; ++c) l.b[k - 1](c) = scale * normal(rng);
  }
  return l;
}

double fixed_image_envelope(double p) {
  const double k = std::floor(p);
  return 0.5 * k * k + 0.5 * (p - k) * (2.0 * k + 1.0);
}

void write_loop_csv(std::ostream& out, const LoopSamples& loop) {
  out << "theta,re_alpha,im_alpha,re_beta,im_beta\n" << std::setprecision(17);
  const double n = loop.grid_n();
  for (int i = 0; i < loop.grid_n(); ++i) {
    const auto& g = loop.values[i];
    out << 2.0 * std::numbers::pi * i / n << ',' << g(0, 0).real() << ',' << g(0, 0).imag() << ','
        << g(0, 1).real() << ',' << g(0, 1).imag() << '\n';
  }
}

}  // namespace momentlab::loop
