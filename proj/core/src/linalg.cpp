#include "momentlab/linalg.hpp"

#include "momentlab/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace momentlab {

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double skew_defect(const Mat& m) { return max_abs(m - m.transpose()); }

double symmetric_defect(const Mat& m) { return max_abs(m + m.transpose()); }

Mat inverse_sqrt_spd(const Mat& s, double floor) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (s + s.transpose()));
  if (eig.info() != Eigen::Success) throw ConvergenceError("eigendecomposition failed");
  const Vec& lam = eig.eigenvalues();
  if (lam.size() > 0 && lam.minCoeff() <= floor) {
    throw DegenerateError("operator is not positive definite (eigenvalue " +
                              std::to_string(lam.minCoeff()) + ")",
                          lam.minCoeff());
  }
  const Mat& q = eig.eigenvectors();
  return q * lam.array().rsqrt().matrix().asDiagonal() * q.transpose();
}

Mat sqrt_spd(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (s + s.transpose()));
  const Vec lam = eig.eigenvalues().cwiseMax(0.0);
  const Mat& q = eig.eigenvectors();
  return q * lam.array().sqrt().matrix().asDiagonal() * q.transpose();
}

Mat null_space(const Mat& a, Eigen::Index cols, double rel_tol) {
  if (a.rows() == 0) return Mat::Identity(cols, cols);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double cutoff = rel_tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

Mat orthogonal_complement(const Vec& v) {
  Mat row = v.transpose();
  return null_space(row, v.size());
}

Vec min_norm_solve(const Mat& a, const Vec& b, double rel_cutoff) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  cod.setThreshold(rel_cutoff);
  return cod.solve(b);
}

Vec singular_values(const Mat& a) {
  if (a.size() == 0) return Vec();
  return Eigen::JacobiSVD<Mat>(a).singularValues();
}

Mat expm(const Mat& a) { return a.exp(); }

double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

}  // namespace momentlab
