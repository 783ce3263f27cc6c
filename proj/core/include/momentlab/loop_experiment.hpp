#pragma once

// Momentum image (p, E) of random truncated loops against the fixed images
// (k, k^2 / 2).

#include "momentlab/convexity.hpp"
#include "momentlab/loop_group.hpp"

#include <cstdint>
#include <vector>

namespace momentlab::loop {

struct LoopExperimentOptions {
  int grid_n = 512;
  double sigma = 0.5;
  int pair_trials = 1000;
  double midpoint_tolerance = 1e-3;  // added to the cloud-relative allowance
};

struct LoopExperimentReport {
  int truncation = 0;
  std::vector<Eigen::Vector2d> points;        // (p, E) per sampled loop
  std::vector<Eigen::Vector2d> fixed_images;  // (k, k^2 / 2), |k| <= K
  ConvexityReport convexity;                  // midpoints of sampled pairs
  double min_energy = 0.0;
  // Cauchy-Schwarz oracle E >= p^2 / 2 and the envelope check E >= env(p)
  double min_cs_margin = 0.0;
  double envelope_tolerance = 0.0;
  double min_envelope_margin = 0.0;
  int envelope_violations = 0;
  bool pass = true;
};

LoopExperimentReport loop_momentum_experiment(int truncation, int sample_count,
                                              std::uint64_t seed,
                                              const LoopExperimentOptions& opt = {});

/// Envelope tolerance from the Cauchy-Schwarz margins: the numerical floor
/// 1e-9 or ten times the worst negative margin, whichever is larger.
double calibrate_envelope_tolerance(double min_cs_margin);

}  // namespace momentlab::loop
