#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gupkit/gup.hpp"
#include "gupkit/htl.hpp"
#include "gupkit/synth.hpp"

namespace gupkit {

enum class SchedulerMode { Htl, Constant };

struct TrainConfig {
  int total_epochs = 60;
  int window = 5;
  double learning_rate = 1.25e-3;
  std::vector<int> lr_decay_epochs = {39, 51};
  double lr_decay_factor = 0.1;
  int warmup_epochs = 5;  // linear ramp, first epoch runs at lr/warmup
  int batch_size = 32;
  std::uint64_t seed = 1;
  SchedulerMode scheduler = SchedulerMode::Htl;
  bool hidden_layer = false;  // single tanh layer in every head
  int hidden_width = 16;
  double train_fraction = 0.7142857142857143;  // used by the CLI split

  void validate() const;
};

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int rows, int cols)
      : rows(rows), cols(cols),
        a(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}
  double& at(int r, int c) {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + c];
  }
  double at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + c];
  }
};

/// One regression head: output layer w/b, optionally preceded by a tanh
/// hidden layer w1/b1 (empty in the default linear configuration).
struct Head {
  Matrix w1;               // feature_dim x hidden (empty when linear)
  std::vector<double> b1;  // hidden
  Matrix w;                // in x out, in = hidden or feature_dim
  std::vector<double> b;   // out
};

/// The five scalar pseudo-task heads, the two distribution heads
/// (location + log-sigma each), and the additive 2D-height correction.
enum class HeadId {
  Heatmap = 0,
  Offset2D,
  Size2D,
  Angle,
  Offset3D,
  H3d,
  Bias,
  H2dCorrection,
};

inline constexpr std::size_t kHeadCount = 8;

const std::string& head_name(HeadId head);
int head_out_dim(HeadId head);

struct ModelParams {
  int feature_dim = 0;
  int hidden_width = 0;  // 0 means linear heads
  double focal_length_px = 0.0;
  std::array<Head, kHeadCount> heads;

  Head& head(HeadId id) { return heads[static_cast<std::size_t>(id)]; }
  const Head& head(HeadId id) const {
    return heads[static_cast<std::size_t>(id)];
  }

  /// Uniform init in [-s, s] with s = 1/sqrt(fan_in); deterministic in the
  /// seed.
  static ModelParams init(int feature_dim, int hidden_width,
                          double focal_length_px, std::uint64_t seed);

  /// Flat CSV of named parameter arrays: param,row,col,value. Includes
  /// config.* rows so a checkpoint is self-describing.
  void write_csv(std::ostream& out) const;
  static ModelParams read_csv(std::istream& in);
};

struct ObjectForward {
  std::array<double, 5> pseudo;  // Heatmap..Offset3D head outputs
  double mu_h;
  double log_sigma_h;
  double mu_b;
  double log_sigma_b;
  double h2d_correction;
  double h2d_eff;  // max(h2d_obs + correction, 0.5)
  DepthPrediction depth;
  double p3d;
  std::array<double, kTaskCount> task_losses;  // unweighted
};

ObjectForward forward(const ModelParams& params, const SyntheticObject& obj);

/// Gradients in the same layout as the parameters.
struct ParamGrads {
  std::array<Head, kHeadCount> heads;

  Head& head(HeadId id) { return heads[static_cast<std::size_t>(id)]; }
  static ParamGrads zeros_like(const ModelParams& params);
  void accumulate(const ParamGrads& other, double scale);
};

/// Analytic gradient of sum_i weights[i] * task_loss_i(obj) with respect
/// to every parameter.
ParamGrads backward(const ModelParams& params, const SyntheticObject& obj,
                    const std::map<TaskId, double>& weights);

/// Weighted total loss for the same weights; the quantity backward
/// differentiates (used by the finite-difference checks).
double weighted_object_loss(const ModelParams& params,
                            const SyntheticObject& obj,
                            const std::map<TaskId, double>& weights);

struct TrainTaskRow {
  int epoch;
  TaskId task;
  double loss;           // epoch-mean, unweighted
  double df;
  double ls;
  double alpha;
  double weight;         // applied during this epoch
  double weighted_term;  // weight * loss
};

struct TrainEpochRow {
  int epoch;
  double lr;
  double holdout_mae;
  double holdout_spearman;  // sigma_d vs |mu_d - d_gt|
};

struct TrainTrace {
  std::vector<TrainTaskRow> task_rows;
  std::vector<TrainEpochRow> epoch_rows;

  /// Scheduler CSV schema extended with lr,holdout_mae,holdout_spearman;
  /// the extra columns live on one summary row per epoch.
  void write_csv(std::ostream& out) const;
};

struct TrainResult {
  ModelParams params;
  TrainTrace trace;
  double untrained_holdout_mae;
  double final_holdout_mae;
};

/// Raised when an epoch-mean loss goes non-finite; carries the task and
/// epoch in the message.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double lr_at_epoch(const TrainConfig& cfg, int epoch);

TrainResult train(const TrainConfig& cfg, const CameraModel& cam,
                  const std::vector<SyntheticObject>& train_set,
                  const std::vector<SyntheticObject>& holdout_set);

}  // namespace gupkit
