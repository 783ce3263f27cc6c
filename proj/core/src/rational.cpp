#include "momentlab/rational.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace momentlab {

namespace {

long long sup_norm(const IntVec& s) { return s.cwiseAbs().maxCoeff(); }

void normalize_sign(IntVec& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) != 0) {
      if (s(i) < 0) s = -s;
      return;
    }
  }
}

double relation_residual(const IntVec& s, const Vec& theta) {
  // compensated sum; witnesses are checked at 1e-12
  long double acc = 0.0L;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    acc += static_cast<long double>(s(i)) * static_cast<long double>(theta(i));
  return static_cast<double>(std::fabs(acc));
}

bool better(const IntVec& a, const IntVec& b) {
  const auto na = sup_norm(a), nb = sup_norm(b);
  if (na != nb) return na < nb;
  const auto l1a = a.cwiseAbs().sum(), l1b = b.cwiseAbs().sum();
  if (l1a != l1b) return l1a < l1b;
  return std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size());
}

std::optional<IntVec> exhaustive(const Vec& theta, long long bound, double tol) {
  const auto d = theta.size();
  Eigen::Index lead = 0;
  theta.cwiseAbs().maxCoeff(&lead);
  std::vector<Eigen::Index> others;
  for (Eigen::Index i = 0; i < d; ++i)
    if (i != lead) others.push_back(i);

  std::optional<IntVec> best;
  IntVec s = IntVec::Zero(d);
  const auto k = others.size();
  std::vector<long long> cur(k, -bound);
  while (true) {
    double partial = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      s(others[j]) = cur[j];
      partial += static_cast<double>(cur[j]) * theta(others[j]);
    }
    const double target = -partial / theta(lead);
    for (double cand : {std::floor(target), std::ceil(target)}) {
      if (std::abs(cand) > static_cast<double>(bound)) continue;
      s(lead) = static_cast<long long>(cand);
      if (s.cwiseAbs().maxCoeff() == 0) continue;
      if (relation_residual(s, theta) <= tol) {
        IntVec w = s;
        normalize_sign(w);
        if (!best || better(w, *best)) best = w;
      }
    }
    // odometer over the non-leading coordinates
    std::size_t j = 0;
    while (j < k && cur[j] == bound) cur[j++] = -bound;
    if (j == k) break;
    ++cur[j];
  }
  return best;
}

// Textbook LLL (delta = 0.99) on the rows of b.
void lll(Eigen::MatrixXd& b) {
  const auto n = b.rows();
  const double delta = 0.99;
  Eigen::MatrixXd bs(n, b.cols());
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
  auto gram_schmidt = [&]() {
    for (Eigen::Index i = 0; i < n; ++i) {
      bs.row(i) = b.row(i);
      for (Eigen::Index j = 0; j < i; ++j) {
        mu(i, j) = b.row(i).dot(bs.row(j)) / bs.row(j).squaredNorm();
        bs.row(i) -= mu(i, j) * bs.row(j);
      }
    }
  };
  gram_schmidt();
  Eigen::Index k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double q = std::round(mu(k, j));
      if (q != 0.0) {
        b.row(k) -= q * b.row(j);
        gram_schmidt();
      }
    }
    if (bs.row(k).squaredNorm() >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bs.row(k - 1).squaredNorm()) {
      ++k;
    } else {
      b.row(k).swap(b.row(k - 1));
      gram_schmidt();
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
}

std::optional<IntVec> lattice_search(const Vec& theta, long long bound, double tol) {
  const auto d = theta.size();
  const double scale = 1.0 / std::max(tol, 1e-300);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d, d + 1);
  for (Eigen::Index i = 0; i < d; ++i) {
    b(i, i) = 1.0;
    b(i, d) = scale * theta(i);
  }
  lll(b);
  std::optional<IntVec> best;
  for (Eigen::Index i = 0; i < d; ++i) {
    IntVec s(d);
    bool ok = true;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double v = std::round(b(i, j));
      if (std::abs(v) > static_cast<double>(bound)) ok = false;
      s(j) = static_cast<long long>(v);
    }
    if (!ok || s.cwiseAbs().maxCoeff() == 0) continue;
    if (relation_residual(s, theta) > tol) continue;
    normalize_sign(s);
    if (!best || better(s, *best)) best = s;
  }
  return best;
}

}  // namespace

RationalCertificate rationally_independent(const Vec& theta, long long coeff_bound,
                                           std::optional<double> tol) {
  if (theta.size() == 0) throw DimensionError("theta must have positive dimension");
  if (coeff_bound < 1) throw InvalidArgument("coeff_bound must be at least 1");
  if (!theta.allFinite()) throw InvalidArgument("theta must be finite");
  RationalCertificate out;
  out.bound = coeff_bound;
  out.tolerance = tol.value_or(1e-9 * theta.norm());
  const auto d = theta.size();
  std::optional<IntVec> w;
  if (theta.norm() == 0.0) {
    w = IntVec::Zero(d);
    (*w)(0) = 1;
    out.method = "exhaustive";
  } else if (d == 1) {
    out.method = "exhaustive";
    if (std::abs(theta(0)) <= out.tolerance) w = IntVec::Constant(1, 1);
  } else if (d <= 3) {
    out.method = "exhaustive";
    w = exhaustive(theta, coeff_bound, out.tolerance);
  } else {
    out.method = "lll";
    w = lattice_search(theta, coeff_bound, out.tolerance);
  }
  if (w) {
    out.independent = false;
    out.witness = *w;
    out.residual = relation_residual(*w, theta);
  }
  return out;
}

}  // namespace momentlab
