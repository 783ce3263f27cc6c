#pragma once

// Bounded integer-relation search and good projections R^{n+1} -> R^n.

#include "momentlab/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace momentlab {

using IntVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

struct RationalCertificate {
  bool independent = true;
  IntVec witness;          // set when dependent: |sum s_i theta_i| <= tol
  double residual = 0.0;   // |sum s_i theta_i| for the witness
  long long bound = 50;
  double tolerance = 0.0;
  std::string method;      // "exhaustive" or "lll"
};

/// Searches integer s != 0 with ||s||_inf <= coeff_bound and
/// |<s, theta>| <= tol (default 1e-9 ||theta||). Exhaustive for dim <= 3
/// (returns the witness of smallest sup norm, first nonzero entry positive),
/// LLL lattice reduction above. Independence is certified only up to the bound.
RationalCertificate rationally_independent(const Vec& theta, long long coeff_bound = 50,
                                           std::optional<double> tol = std::nullopt);

struct ProjectionChoice {
  Mat matrix;             // n x (n+1), orthonormal rows spanning p^perp
  Vec kernel;             // unit p with matrix p = 0
  Vec theta;              // theta perp p
  Vec hyperplane_normal;  // H' = (pi^*)^-1 H = {y : <y, normal> = 0}
  Vec embedded_theta;     // embedding * theta
  RationalCertificate certificate;
  int trials_used = 0;
};

/// Evaluates one candidate (p, theta): requires theta perp p to 1e-12, p not
/// parallel to h, and embedding * theta certified independent. Returns nullopt
/// when the candidate is rejected.
std::optional<ProjectionChoice> evaluate_projection(const Vec& p, const Vec& theta,
                                                    const Mat& embedding, const Vec& h,
                                                    long long coeff_bound = 50);

/// Random unit kernels p and theta = theta' - <theta', p> p until a candidate
/// passes evaluate_projection. Throws ConvergenceError when trials run out.
ProjectionChoice choose_good_projection(int n_plus_1, const Mat& embedding, const Vec& h,
                                        int trials = 100, std::uint64_t seed = 0);

}  // namespace momentlab
