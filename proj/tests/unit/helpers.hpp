#pragma once

#include "momentlab/linalg.hpp"

#include <random>

namespace testutil {

using momentlab::Mat;
using momentlab::Vec;

inline Mat gaussian(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

inline Vec gaussian_vec(int r, std::mt19937_64& rng) { return gaussian(r, 1, rng); }

inline Mat random_skew(int d, std::mt19937_64& rng) {
  const Mat m = gaussian(d, d, rng);
  return m - m.transpose();
}

inline Mat random_spd(int d, std::mt19937_64& rng) {
  const Mat b = gaussian(d, d, rng);
  return b * b.transpose() + 0.5 * Mat::Identity(d, d);
}

inline Mat rot2(double k) {
  Mat r(2, 2);
  r << 0, -k, k, 0;
  return r;
}

}  // namespace testutil
