#include "momentlab/loop_experiment.hpp"

#include "momentlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace momentlab::loop {

double calibrate_envelope_tolerance(double min_cs_margin) {
  return std::max(1e-9, 10.0 * std::max(0.0, -min_cs_margin));
}

LoopExperimentReport loop_momentum_experiment(int truncation, int sample_count,
                                              std::uint64_t seed,
                                              const LoopExperimentOptions& opt) {
  if (truncation < 1) throw InvalidArgument("K must be at least 1");
  if (!(opt.sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  if (sample_count < 0) throw InvalidArgument("sample_count must be nonnegative");
  LoopExperimentReport rep;
  rep.truncation = truncation;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < sample_count; ++i) {
    const FourierLoop l = random_loop(truncation, opt.grid_n, opt.sigma, rng);
    rep.points.push_back(momentum_image(loop_eval(l)));
  }
  for (const auto& f : fixed_point_loops(truncation, opt.grid_n)) rep.fixed_images.push_back(f.image);

  rep.min_energy = INFINITY;
  rep.min_cs_margin = INFINITY;
  for (const auto& q : rep.points) {
    rep.min_energy = std::min(rep.min_energy, q(1));
    rep.min_cs_margin = std::min(rep.min_cs_margin, q(1) - 0.5 * q(0) * q(0));
  }
  if (rep.points.empty()) rep.min_energy = rep.min_cs_margin = 0.0;
  rep.envelope_tolerance = calibrate_envelope_tolerance(rep.min_cs_margin);
  rep.min_envelope_margin = INFINITY;
  for (const auto& q : rep.points) {
    const double margin = q(1) - fixed_image_envelope(q(0));
    rep.min_envelope_margin = std::min(rep.min_envelope_margin, margin);
    if (margin < -rep.envelope_tolerance) ++rep.envelope_violations;
  }
  if (rep.points.empty()) rep.min_envelope_margin = 0.0;

  std::vector<Vec> cloud, fixed;
  for (const auto& q : rep.points) cloud.push_back(q);
  for (const auto& q : rep.fixed_images) fixed.push_back(q);
  // pairs are drawn from the samples; the fixed images join the reference set
  if (!cloud.empty())
    rep.convexity = verify_convexity(cloud, opt.pair_trials, opt.midpoint_tolerance,
                                     seed ^ 0x9e3779b97f4a7c15ULL, ToleranceMode::cloud_relative,
                                     fixed);
  else
    rep.convexity = verify_convexity(fixed, opt.pair_trials, opt.midpoint_tolerance, seed);
  rep.convexity.fixed_images = fixed;
  rep.pass = rep.convexity.pass && rep.envelope_violations == 0 && rep.min_energy >= -1e-12;
  return rep;
}

}  // namespace momentlab::loop
