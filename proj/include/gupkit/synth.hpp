#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gupkit/htl.hpp"

namespace gupkit {

/// Configuration of the synthetic monocular scene. Stands in for a real
/// driving dataset: depths are uniform over a road-scale range, heights
/// are car-like, and the 2D observation carries optional pixel noise.
struct SceneConfig {
  int n_objects = 7000;
  double focal_length_px = 707.0;
  double depth_min_m = 5.0;
  double depth_max_m = 80.0;
  double h3d_mean_m = 1.53;
  double h3d_std_m = 0.13;
  double h2d_noise_px = 0.5;
  int feature_dim = 8;
  double label_noise_m = 0.2;
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

struct SyntheticObject {
  double h3d_gt_m;
  double depth_gt_m;
  double h2d_true_px;   // exact projection f*h3d/depth
  double h2d_obs_px;    // noisy observation, floored at 0.5 px
  double p2d;           // synthetic 2D detection score in (0.3, 1]
  std::vector<double> features;
  std::array<double, kTaskCount> targets;  // indexed by TaskId

  double target(TaskId task) const {
    return targets[static_cast<std::size_t>(task)];
  }
};

/// Deterministic generation: object i draws all of its randomness from the
/// substream (seed, i), so the sequence is reproducible element-wise.
std::vector<SyntheticObject> generate(const SceneConfig& cfg);

/// Deterministic shuffle-split into (train, holdout); disjoint and
/// exhaustive. Throws std::domain_error on an empty input or a fraction
/// outside (0,1).
std::pair<std::vector<SyntheticObject>, std::vector<SyntheticObject>> split(
    const std::vector<SyntheticObject>& objects, double train_fraction,
    std::uint64_t seed);

/// CSV header: idx,h3d_gt,depth_gt,h2d_true,h2d_obs,p2d,f0..f{D-1},
/// t_heatmap,t_offset2d,t_size2d,t_angle,t_offset3d,t_size3d,t_depth.
void write_dataset_csv(std::ostream& out,
                       const std::vector<SyntheticObject>& objects,
                       int feature_dim);

std::vector<SyntheticObject> read_dataset_csv(std::istream& in);

}  // namespace gupkit
