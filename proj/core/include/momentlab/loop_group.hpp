#pragma once

// Based loops in SU(2) with finitely many Fourier modes, the energy and
// momentum functionals, the H^1 metric and symplectic form on tangent paths,
// and the rotation and conjugation actions of S^1 and the maximal torus T.
//
// su(2) elements are stored as real 3-vectors in the orthonormal basis
//   X = [[0, 1], [-1, 0]],  Y = [[0, i], [i, 0]],  H = [[i, 0], [0, -i]]
// for <U, V> = -1/2 tr(UV), so ||H|| = 1 and [U, V] corresponds to 2 u x v.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace momentlab::loop {

using Algebra = Eigen::Vector3d;
using SU2 = Eigen::Matrix2cd;
using AlgebraPath = std::vector<Algebra>;

Eigen::Matrix2cd to_matrix(const Algebra& u);
Algebra from_matrix(const Eigen::Matrix2cd& m);
SU2 exp_su2(const Algebra& u);

/// Grid values gamma(theta_i) at theta_i = 2 pi i / n, i = 0..n-1.
struct LoopSamples {
  std::vector<SU2> values;

  int grid_n() const { return static_cast<int>(values.size()); }
};

/// gamma = exp(xi(theta)) with xi(theta) = sum_k a_k sin(k theta) + b_k (cos(k theta) - 1).
struct FourierLoop {
  int truncation = 0;  // K
  std::vector<Algebra> a;  // a[k-1]
  std::vector<Algebra> b;
  int grid_n = 512;

  static FourierLoop constant(int truncation, int grid_n = 512);
  /// Coefficients packed as [a_1, b_1, a_2, b_2, ...] (6K reals).
  static FourierLoop from_coefficients(const Eigen::VectorXd& c, int grid_n = 512);
  Eigen::VectorXd coefficients() const;

  Algebra path(double theta) const;
};

/// Throws InvalidArgument when grid_n < 8 K.
LoopSamples loop_eval(const FourierLoop& loop);

/// gamma_k(theta) = exp(k theta H), evaluated exactly.
LoopSamples homomorphism_loop(int k, int grid_n = 512);

/// Spectral derivative of a periodic algebra-valued grid path.
AlgebraPath spectral_derivative(const AlgebraPath& path);

/// gamma^-1 gamma' at every grid node, gamma' from spectral differentiation.
AlgebraPath log_derivative(const LoopSamples& loop);

/// gamma' gamma^-1 at every grid node.
AlgebraPath right_log_derivative(const LoopSamples& loop);

/// E = (1/4 pi) int ||gamma^-1 gamma'||^2 d theta.
double energy(const LoopSamples& loop);

/// p = H-component of (1/2 pi) int gamma' gamma^-1 d theta. The right
/// logarithmic derivative makes p invariant under rotation
/// gamma(s + phi) gamma(phi)^-1; the left one is not.
double momentum_t(const LoopSamples& loop);

/// (p, E) in one pass.
Eigen::Vector2d momentum_image(const LoopSamples& loop);

/// omega(gamma, eta) = (1/2 pi) int <gamma', eta> d theta.
double loop_symplectic_form(const AlgebraPath& gamma_tan, const AlgebraPath& eta_tan);

/// <gamma, eta>_1 = (1/2 pi) int <gamma, eta> + (1/2 pi) int <gamma', eta'>.
double h1_inner_product(const AlgebraPath& gamma_tan, const AlgebraPath& eta_tan);

/// Tangent path sum_k a_k sin(k theta) + b_k (cos(k theta) - 1) on a grid.
AlgebraPath tangent_path(const Eigen::VectorXd& coefficients, int grid_n);

/// (e^{i phi} gamma)(s) = gamma(s + phi) gamma(phi)^-1. Off-grid shifts use
/// trigonometric interpolation of the matrix entries.
LoopSamples rotate_loop(double phi, const LoopSamples& loop);

/// (t gamma)(s) = t gamma(s) t^-1 with t = exp(t_param H).
LoopSamples conjugate_loop(double t_param, const LoopSamples& loop);

/// max_theta ||gamma^H gamma - I|| and max |det gamma - 1|.
double unitarity_defect(const LoopSamples& loop);

struct FixedLoop {
  int k = 0;
  LoopSamples loop;
  Eigen::Vector2d image;  // (p, E)
};

/// The homomorphisms gamma_k, |k| <= K, each checked fixed under rotation
/// and conjugation to 1e-10 (throws ConvergenceError otherwise).
std::vector<FixedLoop> fixed_point_loops(int truncation, int grid_n = 512);

/// Gaussian coefficients with per-mode scale sigma / k^2.
FourierLoop random_loop(int truncation, int grid_n, double sigma, std::mt19937_64& rng);

/// Lower convex envelope of {(k, k^2 / 2) : k integer} at p.
double fixed_image_envelope(double p);

/// CSV: theta, re alpha, im alpha, re beta, im beta for gamma = [[alpha, beta], [-conj beta, conj alpha]].
void write_loop_csv(std::ostream& out, const LoopSamples& loop);

}  // namespace momentlab::loop
