#pragma once

#include <Eigen/Dense>

#include <vector>

namespace momentlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Largest absolute entry of m - m^T.
double skew_defect(const Mat& m);

/// Largest absolute entry of m + m^T.
double symmetric_defect(const Mat& m);

/// Largest absolute entry, 0 for empty matrices.
double max_abs(const Mat& m);

/// S^(-1/2) of a symmetric positive definite matrix via eigendecomposition.
/// Eigenvalues at or below `floor` raise DegenerateError.
Mat inverse_sqrt_spd(const Mat& s, double floor = 1e-12);

/// S^(1/2) of a symmetric positive semidefinite matrix.
Mat sqrt_spd(const Mat& s);

/// Orthonormal basis (columns) of the null space of `a` (rows are constraints).
/// With zero rows the identity of size `cols` is returned.
Mat null_space(const Mat& a, Eigen::Index cols, double rel_tol = 1e-12);

/// Orthonormal basis of the orthogonal complement of a single vector.
Mat orthogonal_complement(const Vec& v);

/// Moore-Penrose pseudo-inverse applied to a vector: argmin ||x|| s.t. a x = b (least squares).
Vec min_norm_solve(const Mat& a, const Vec& b, double rel_cutoff = 1e-14);

/// Singular values in descending order.
Vec singular_values(const Mat& a);

/// Matrix exponential.
Mat expm(const Mat& a);

double dist(const Vec& a, const Vec& b);

}  // namespace momentlab
