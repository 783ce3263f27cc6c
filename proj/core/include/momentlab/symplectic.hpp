#pragma once

// Linear symplectic algebra at a single tangent space: frames, compatible
// complex structures, Hessian signatures, isotropy weights of a linear torus
// action, and averaging over a torus.

#include "momentlab/linalg.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace momentlab {

/// A symplectic form together with an inner product on R^dim and the operator
/// A representing the form: omega(u, v) = u^T Omega v = <A u, v>_metric.
struct SymplecticFrame {
  int dim = 0;
  Mat omega;
  Mat metric;
  Mat a_operator;

  double form(const Vec& u, const Vec& v) const { return u.dot(omega * v); }
  double inner(const Vec& u, const Vec& v) const { return u.dot(metric * v); }
};

/// Validates (omega, metric) and assembles A = -metric^-1 omega.
///
/// Throws DimensionError on shape mismatch, DegenerateError when omega has a
/// singular value below 1e-10, InvalidArgument when omega is not skew or the
/// metric is not symmetric positive definite.
SymplecticFrame build_frame(const Mat& omega, const Mat& metric);

struct ComplexStructure {
  Mat j;
};

/// J = (A A*)^(-1/2) A with A* the metric adjoint (polar factor of A).
ComplexStructure compatible_complex_structure(const SymplecticFrame& frame);

struct HessianSpectrum {
  Vec eigenvalues;  // ascending
  int index = 0;
  int coindex = 0;
  bool degenerate = false;
  double tolerance = 0.0;
};

/// Signature of a symmetric matrix. The default tolerance is
/// 1e-8 * max |eigenvalue|; eigenvalues with |lambda| <= tolerance are null.
HessianSpectrum hessian_spectrum(const Mat& h, std::optional<double> tol = std::nullopt);

struct IsotropyWeights {
  std::vector<Eigen::VectorXi> weights;  // one per invariant complex line
  int fixed_dim = 0;
};

/// Weights of a linear torus action given by commuting infinitesimally
/// symplectic generators. On the summand V_alpha each generator acts as
/// alpha_j * J for the compatible J of the (torus-averaged) frame, so the
/// Hessian of the momentum component along xi has eigenvalue -<alpha, xi> there.
IsotropyWeights isotropy_weights(const SymplecticFrame& frame, std::span<const Mat> generators);

/// Hessian eigenvalues of mu^xi predicted by the weights (ascending).
Vec hessian_eigenvalues_from_weights(const IsotropyWeights& w, const Vec& xi);

using PointMap = std::function<Vec(const Vec&)>;

/// u -> N^-n sum_g g . map(g^-1 . u) over the uniform N^n grid of the torus
/// exp(sum t_j L_j), t_j in [0, 2 pi). Generators must be 2 pi periodic.
PointMap group_average(PointMap map, std::vector<Mat> generators, int quadrature_points);

/// Torus average of an inner product, g -> N^-n sum_g g^T G g.
Mat average_metric(const Mat& metric, std::span<const Mat> generators, int quadrature_points);

}  // namespace momentlab
