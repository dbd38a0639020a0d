#include "gupkit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "gupkit/eval.hpp"
#include "gupkit/io.hpp"
#include "gupkit/rng.hpp"

namespace gupkit {

namespace {

const std::array<std::string, kHeadCount> kHeadNames = {
    "heatmap", "offset2d", "size2d", "angle",
    "offset3d", "h3d",      "bias",   "h2d_corr",
};

constexpr std::array<int, kHeadCount> kHeadOutDims = {1, 1, 1, 1, 1, 2, 2, 1};

constexpr double kMinH2dPx = 0.5;

// Stream ids for the counter RNG; init and the per-epoch shuffles must not
// reuse each other's draws.
constexpr std::uint64_t kInitStream = 0x1217ull;
constexpr std::uint64_t kShuffleStreamBase = 0xE70C45ull;

std::size_t hidx(HeadId id) { return static_cast<std::size_t>(id); }

void init_layer(Matrix& w, std::vector<double>& b, int in, int out,
                CounterRng& rng) {
  const double s = 1.0 / std::sqrt(static_cast<double>(in));
  w = Matrix(in, out);
  for (double& v : w.a) v = rng.uniform(-s, s);
  b.assign(static_cast<std::size_t>(out), 0.0);
  for (double& v : b) v = rng.uniform(-s, s);
}

struct HeadActivation {
  std::vector<double> hidden;  // tanh activations; empty in linear mode
  std::vector<double> out;
};

HeadActivation head_forward(const Head& head, const std::vector<double>& x,
                            bool hidden_mode) {
  HeadActivation act;
  const std::vector<double>* input = &x;
  if (hidden_mode) {
    act.hidden.assign(static_cast<std::size_t>(head.w1.cols), 0.0);
    for (int j = 0; j < head.w1.cols; ++j) {
      double a = head.b1[static_cast<std::size_t>(j)];
      for (int i = 0; i < head.w1.rows; ++i) {
        a += head.w1.at(i, j) * x[static_cast<std::size_t>(i)];
      }
      act.hidden[static_cast<std::size_t>(j)] = std::tanh(a);
    }
    input = &act.hidden;
  }
  act.out.assign(static_cast<std::size_t>(head.w.cols), 0.0);
  for (int k = 0; k < head.w.cols; ++k) {
    double y = head.b[static_cast<std::size_t>(k)];
    for (int j = 0; j < head.w.rows; ++j) {
      y += head.w.at(j, k) * (*input)[static_cast<std::size_t>(j)];
    }
    act.out[static_cast<std::size_t>(k)] = y;
  }
  return act;
}

/// Backpropagate dL/dout into the head's gradient, given the forward
/// activations.
void head_backward(const Head& head, const std::vector<double>& x,
                   const HeadActivation& act,
                   const std::vector<double>& d_out, bool hidden_mode,
                   Head& grad) {
  const std::vector<double>& input = hidden_mode ? act.hidden : x;
  for (int k = 0; k < head.w.cols; ++k) {
    const double g = d_out[static_cast<std::size_t>(k)];
    grad.b[static_cast<std::size_t>(k)] += g;
    for (int j = 0; j < head.w.rows; ++j) {
      grad.w.at(j, k) += input[static_cast<std::size_t>(j)] * g;
    }
  }
  if (!hidden_mode) return;
  for (int j = 0; j < head.w1.cols; ++j) {
    double dh = 0.0;
    for (int k = 0; k < head.w.cols; ++k) {
      dh += head.w.at(j, k) * d_out[static_cast<std::size_t>(k)];
    }
    const double h = act.hidden[static_cast<std::size_t>(j)];
    const double da = (1.0 - h * h) * dh;
    grad.b1[static_cast<std::size_t>(j)] += da;
    for (int i = 0; i < head.w1.rows; ++i) {
      grad.w1.at(i, j) += x[static_cast<std::size_t>(i)] * da;
    }
  }
}

Head zero_head_like(const Head& head) {
  Head g;
  g.w1 = Matrix(head.w1.rows, head.w1.cols);
  g.b1.assign(head.b1.size(), 0.0);
  g.w = Matrix(head.w.rows, head.w.cols);
  g.b.assign(head.b.size(), 0.0);
  return g;
}

/// Whether the distribution heads produced values the projection algebra
/// accepts: finite locations, positive (possibly infinite) spreads, and a
/// finite positive 2D height.
bool depth_path_usable(double mu_h, double sigma_h, double mu_b,
                       double sigma_b, double h2d_eff) {
  return std::isfinite(mu_h) && sigma_h > 0.0 && std::isfinite(mu_b) &&
         sigma_b > 0.0 && std::isfinite(h2d_eff) && h2d_eff > 0.0;
}

std::map<TaskId, double> losses_as_map(
    const std::array<double, kTaskCount>& losses) {
  std::map<TaskId, double> m;
  for (TaskId task : kAllTasks) {
    m[task] = losses[static_cast<std::size_t>(task)];
  }
  return m;
}

}  // namespace

const std::string& head_name(HeadId head) { return kHeadNames[hidx(head)]; }

int head_out_dim(HeadId head) { return kHeadOutDims[hidx(head)]; }

void TrainConfig::validate() const {
  if (total_epochs < 1) throw std::invalid_argument("total_epochs must be >= 1");
  if (!(total_epochs >= window && window >= 1)) {
    throw std::invalid_argument("need total_epochs >= window >= 1");
  }
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning_rate must be > 0");
  if (!(lr_decay_factor > 0.0))
    throw std::invalid_argument("lr_decay_factor must be > 0");
  if (warmup_epochs < 0)
    throw std::invalid_argument("warmup_epochs must be >= 0");
  if (warmup_epochs >= total_epochs) {
    throw std::invalid_argument("warmup_epochs must be < total_epochs");
  }
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (hidden_layer && hidden_width < 1) {
    throw std::invalid_argument("hidden_width must be >= 1");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0,1)");
  }
}

ModelParams ModelParams::init(int feature_dim, int hidden_width,
                              double focal_length_px, std::uint64_t seed) {
  if (feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
  if (hidden_width < 0) throw std::invalid_argument("hidden_width must be >= 0");
  if (!(focal_length_px > 0.0)) {
    throw std::invalid_argument("focal_length_px must be > 0");
  }
  ModelParams p;
  p.feature_dim = feature_dim;
  p.hidden_width = hidden_width;
  p.focal_length_px = focal_length_px;
  CounterRng rng(seed, kInitStream);
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    Head& head = p.heads[h];
    const int out = kHeadOutDims[h];
    if (hidden_width > 0) {
      init_layer(head.w1, head.b1, feature_dim, hidden_width, rng);
      init_layer(head.w, head.b, hidden_width, out, rng);
    } else {
      init_layer(head.w, head.b, feature_dim, out, rng);
    }
  }
  return p;
}

ObjectForward forward(const ModelParams& params, const SyntheticObject& obj) {
  if (static_cast<int>(obj.features.size()) != params.feature_dim) {
    throw std::invalid_argument(
        "object has " + std::to_string(obj.features.size()) +
        " features, model expects " + std::to_string(params.feature_dim));
  }
  const bool hidden = params.hidden_width > 0;

  std::array<double, 5> pseudo{};
  for (int k = 0; k < 5; ++k) {
    pseudo[static_cast<std::size_t>(k)] =
        head_forward(params.heads[static_cast<std::size_t>(k)], obj.features,
                     hidden)
            .out[0];
  }
  const auto h3d_out =
      head_forward(params.head(HeadId::H3d), obj.features, hidden).out;
  const auto bias_out =
      head_forward(params.head(HeadId::Bias), obj.features, hidden).out;
  const double correction =
      head_forward(params.head(HeadId::H2dCorrection), obj.features, hidden)
          .out[0];
  const double h2d_eff = std::max(obj.h2d_obs_px + correction, kMinH2dPx);
  const double sigma_h = std::exp(h3d_out[1]);
  const double sigma_b = std::exp(bias_out[1]);

  std::array<double, kTaskCount> task_losses{};
  for (int k = 0; k < 5; ++k) {
    const auto task = static_cast<TaskId>(k);
    const double r = pseudo[static_cast<std::size_t>(k)] - obj.target(task);
    task_losses[static_cast<std::size_t>(task)] = r * r;
  }

  // A diverging run can push log-sigma into exp() underflow or a head
  // output to NaN. Losses must still come back (as +inf) so the trainer's
  // epoch guard sees the divergence instead of a constructor throw.
  if (!depth_path_usable(h3d_out[0], sigma_h, bias_out[0], sigma_b, h2d_eff)) {
    task_losses[static_cast<std::size_t>(TaskId::Size3D)] =
        std::numeric_limits<double>::infinity();
    task_losses[static_cast<std::size_t>(TaskId::Depth)] =
        std::numeric_limits<double>::infinity();
    const DepthPrediction placeholder{LaplaceDist(0.0, 1.0),
                                      LaplaceDist(0.0, 1.0), 0.0};
    return ObjectForward{
        pseudo,      h3d_out[0], h3d_out[1],
        bias_out[0], bias_out[1], correction,
        h2d_eff,     placeholder, 0.0,
        task_losses,
    };
  }

  const GupInputs inputs{
      LaplaceDist(h3d_out[0], sigma_h),
      h2d_eff,
      LaplaceDist(bias_out[0], sigma_b),
      CameraModel(params.focal_length_px),
  };
  const DepthPrediction depth = predict_depth(inputs);

  task_losses[static_cast<std::size_t>(TaskId::Size3D)] =
      laplace_nll(h3d_out[0], sigma_h, obj.target(TaskId::Size3D));
  task_losses[static_cast<std::size_t>(TaskId::Depth)] =
      depth_loss(depth.depth_dist, obj.target(TaskId::Depth));

  return ObjectForward{
      pseudo,     h3d_out[0], h3d_out[1],
      bias_out[0], bias_out[1], correction,
      h2d_eff,    depth,      fuse_scores(obj.p2d, depth.confidence),
      task_losses,
  };
}

ParamGrads ParamGrads::zeros_like(const ModelParams& params) {
  ParamGrads g;
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    g.heads[h] = zero_head_like(params.heads[h]);
  }
  return g;
}

void ParamGrads::accumulate(const ParamGrads& other, double scale) {
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    Head& dst = heads[h];
    const Head& src = other.heads[h];
    for (std::size_t i = 0; i < dst.w.a.size(); ++i) {
      dst.w.a[i] += scale * src.w.a[i];
    }
    for (std::size_t i = 0; i < dst.b.size(); ++i) {
      dst.b[i] += scale * src.b[i];
    }
    for (std::size_t i = 0; i < dst.w1.a.size(); ++i) {
      dst.w1.a[i] += scale * src.w1.a[i];
    }
    for (std::size_t i = 0; i < dst.b1.size(); ++i) {
      dst.b1[i] += scale * src.b1[i];
    }
  }
}

ParamGrads backward(const ModelParams& params, const SyntheticObject& obj,
                    const std::map<TaskId, double>& weights) {
  const bool hidden = params.hidden_width > 0;
  ParamGrads grads = ParamGrads::zeros_like(params);

  std::array<HeadActivation, kHeadCount> acts;
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    acts[h] = head_forward(params.heads[h], obj.features, hidden);
  }

  // Pseudo tasks: squared error.
  for (int k = 0; k < 5; ++k) {
    const auto task = static_cast<TaskId>(k);
    const double w = weights.at(task);
    const double r = acts[static_cast<std::size_t>(k)].out[0] - obj.target(task);
    const std::vector<double> d_out = {w * 2.0 * r};
    head_backward(params.heads[static_cast<std::size_t>(k)], obj.features,
                  acts[static_cast<std::size_t>(k)], d_out, hidden,
                  grads.heads[static_cast<std::size_t>(k)]);
  }

  const double mu_h = acts[hidx(HeadId::H3d)].out[0];
  const double sigma_h = std::exp(acts[hidx(HeadId::H3d)].out[1]);
  const double mu_b = acts[hidx(HeadId::Bias)].out[0];
  const double sigma_b = std::exp(acts[hidx(HeadId::Bias)].out[1]);
  const double corr = acts[hidx(HeadId::H2dCorrection)].out[0];
  const double h2d_eff = std::max(obj.h2d_obs_px + corr, kMinH2dPx);

  // Diverged heads contribute no gradient; the loss guard aborts the run.
  if (!depth_path_usable(mu_h, sigma_h, mu_b, sigma_b, h2d_eff)) {
    return grads;
  }

  const GupInputs inputs{
      LaplaceDist(mu_h, sigma_h),
      h2d_eff,
      LaplaceDist(mu_b, sigma_b),
      CameraModel(params.focal_length_px),
  };

  // Height task: uncertainty regression on (mu_h, log sigma_h) directly.
  const double w_size3d = weights.at(TaskId::Size3D);
  const LaplaceNllGrad height_grad =
      laplace_nll_grad(mu_h, sigma_h, obj.target(TaskId::Size3D));

  // Depth task: chain through projection and composition. The 2D height
  // enters via the correction head unless the floor clamp is active.
  const double w_depth = weights.at(TaskId::Depth);
  const DepthLossGrad depth_grad =
      depth_loss_grad(inputs, obj.target(TaskId::Depth));

  const std::vector<double> d_h3d = {
      w_size3d * height_grad.d_mu + w_depth * depth_grad.d_mu_h,
      w_size3d * height_grad.d_sigma * sigma_h +
          w_depth * depth_grad.d_log_sigma_h,
  };
  head_backward(params.head(HeadId::H3d), obj.features, acts[hidx(HeadId::H3d)],
                d_h3d, hidden, grads.head(HeadId::H3d));

  const std::vector<double> d_bias = {
      w_depth * depth_grad.d_mu_b,
      w_depth * depth_grad.d_log_sigma_b,
  };
  head_backward(params.head(HeadId::Bias), obj.features,
                acts[hidx(HeadId::Bias)], d_bias, hidden,
                grads.head(HeadId::Bias));

  const bool clamped = obj.h2d_obs_px + corr <= kMinH2dPx;
  const std::vector<double> d_corr = {clamped ? 0.0
                                              : w_depth * depth_grad.d_h2d};
  head_backward(params.head(HeadId::H2dCorrection), obj.features,
                acts[hidx(HeadId::H2dCorrection)], d_corr, hidden,
                grads.head(HeadId::H2dCorrection));
  return grads;
}

double weighted_object_loss(const ModelParams& params,
                            const SyntheticObject& obj,
                            const std::map<TaskId, double>& weights) {
  const ObjectForward f = forward(params, obj);
  return weighted_total(losses_as_map(f.task_losses), weights).total;
}

double lr_at_epoch(const TrainConfig& cfg, int epoch) {
  if (cfg.warmup_epochs > 0 && epoch <= cfg.warmup_epochs) {
    return cfg.learning_rate * static_cast<double>(epoch) /
           static_cast<double>(cfg.warmup_epochs);
  }
  double lr = cfg.learning_rate;
  for (int decay_epoch : cfg.lr_decay_epochs) {
    if (epoch >= decay_epoch) lr *= cfg.lr_decay_factor;
  }
  return lr;
}

namespace {

struct HoldoutMetrics {
  double mae;
  double spearman_corr;
};

HoldoutMetrics holdout_metrics(const ModelParams& params,
                               const std::vector<SyntheticObject>& holdout) {
  if (holdout.empty()) {
    return HoldoutMetrics{std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::quiet_NaN()};
  }
  std::vector<std::pair<double, double>> preds;
  std::vector<double> sigmas;
  std::vector<double> abserrs;
  preds.reserve(holdout.size());
  sigmas.reserve(holdout.size());
  abserrs.reserve(holdout.size());
  for (const auto& obj : holdout) {
    const ObjectForward f = forward(params, obj);
    const double gt = obj.target(TaskId::Depth);
    preds.emplace_back(f.depth.depth_dist.mu, gt);
    sigmas.push_back(f.depth.depth_dist.sigma);
    abserrs.push_back(std::abs(f.depth.depth_dist.mu - gt));
  }
  return HoldoutMetrics{depth_mae(preds), spearman(sigmas, abserrs)};
}

std::map<TaskId, double> unit_weights() {
  std::map<TaskId, double> w;
  for (TaskId task : kAllTasks) w[task] = 1.0;
  return w;
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const CameraModel& cam,
                  const std::vector<SyntheticObject>& train_set,
                  const std::vector<SyntheticObject>& holdout_set) {
  cfg.validate();
  if (train_set.empty()) {
    throw std::invalid_argument("train set must be nonempty");
  }
  const int feature_dim = static_cast<int>(train_set.front().features.size());
  for (const auto& obj : train_set) {
    if (static_cast<int>(obj.features.size()) != feature_dim) {
      throw std::invalid_argument("inconsistent feature dimensions in train set");
    }
  }

  ModelParams params =
      ModelParams::init(feature_dim, cfg.hidden_layer ? cfg.hidden_width : 0,
                        cam.focal_length_px, cfg.seed);

  TrainResult result{params, {}, 0.0, 0.0};
  result.untrained_holdout_mae = holdout_metrics(params, holdout_set).mae;

  HtlScheduler scheduler(default_task_graph(),
                         ScheduleConfig(cfg.total_epochs, cfg.window));
  const std::map<TaskId, double> ones = unit_weights();
  std::map<TaskId, double> applied =
      cfg.scheduler == SchedulerMode::Htl ? scheduler.current_weights() : ones;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int epoch = 1; epoch <= cfg.total_epochs; ++epoch) {
    const double lr = lr_at_epoch(cfg, epoch);

    CounterRng shuffle_rng(cfg.seed,
                           kShuffleStreamBase + static_cast<std::uint64_t>(epoch));
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = shuffle_rng.next_u64() % (i + 1);
      std::swap(order[i], order[j]);
    }

    std::array<double, kTaskCount> loss_sums{};
    std::size_t pos = 0;
    while (pos < order.size()) {
      const std::size_t batch_end =
          std::min(pos + static_cast<std::size_t>(cfg.batch_size), order.size());
      ParamGrads batch_grads = ParamGrads::zeros_like(params);
      for (std::size_t i = pos; i < batch_end; ++i) {
        const SyntheticObject& obj = train_set[order[i]];
        const ObjectForward f = forward(params, obj);
        for (std::size_t t = 0; t < kTaskCount; ++t) {
          loss_sums[t] += f.task_losses[t];
        }
        batch_grads.accumulate(backward(params, obj, applied), 1.0);
      }
      const double step = -lr;  // gradients are summed across the batch
      for (std::size_t h = 0; h < kHeadCount; ++h) {
        Head& dst = params.heads[h];
        const Head& g = batch_grads.heads[h];
        for (std::size_t i = 0; i < dst.w.a.size(); ++i) {
          dst.w.a[i] += step * g.w.a[i];
        }
        for (std::size_t i = 0; i < dst.b.size(); ++i) {
          dst.b[i] += step * g.b[i];
        }
        for (std::size_t i = 0; i < dst.w1.a.size(); ++i) {
          dst.w1.a[i] += step * g.w1.a[i];
        }
        for (std::size_t i = 0; i < dst.b1.size(); ++i) {
          dst.b1[i] += step * g.b1[i];
        }
      }
      pos = batch_end;
    }

    std::map<TaskId, double> epoch_losses;
    for (TaskId task : kAllTasks) {
      const double mean =
          loss_sums[static_cast<std::size_t>(task)] /
          static_cast<double>(train_set.size());
      if (!std::isfinite(mean)) {
        throw DivergenceError("non-finite epoch-mean loss for task " +
                              task_name(task) + " at epoch " +
                              std::to_string(epoch));
      }
      epoch_losses[task] = mean;
    }

    const HoldoutMetrics metrics = holdout_metrics(params, holdout_set);

    const auto& next =
        scheduler.step(epoch, epoch_losses);  // records the htl trace row

    const auto& sched_trace = scheduler.trace();
    const std::size_t row_base = sched_trace.size() - kTaskCount;
    for (std::size_t t = 0; t < kTaskCount; ++t) {
      const HtlTraceRow& src = sched_trace[row_base + t];
      TrainTaskRow row{};
      row.epoch = epoch;
      row.task = src.task;
      row.loss = src.loss;
      row.df = src.df;
      row.ls = src.ls;
      row.alpha = src.alpha;
      row.weight = applied.at(src.task);
      row.weighted_term = row.weight * row.loss;
      result.trace.task_rows.push_back(row);
    }
    result.trace.epoch_rows.push_back(
        TrainEpochRow{epoch, lr, metrics.mae, metrics.spearman_corr});

    applied = cfg.scheduler == SchedulerMode::Htl ? next : ones;
    result.final_holdout_mae = metrics.mae;
  }

  result.params = params;
  return result;
}

void TrainTrace::write_csv(std::ostream& out) const {
  out << "epoch,task,loss,df,ls,alpha,weight,lr,holdout_mae,holdout_spearman\n";
  std::size_t task_idx = 0;
  for (const auto& epoch_row : epoch_rows) {
    while (task_idx < task_rows.size() &&
           task_rows[task_idx].epoch == epoch_row.epoch) {
      const auto& r = task_rows[task_idx];
      out << r.epoch << ',' << task_name(r.task) << ',' << fmt_double(r.loss)
          << ',' << fmt_double(r.df) << ',' << fmt_double(r.ls) << ','
          << fmt_double(r.alpha) << ',' << fmt_double(r.weight) << ",,,\n";
      ++task_idx;
    }
    out << epoch_row.epoch << ",summary,,,,,," << fmt_double(epoch_row.lr)
        << ',' << fmt_double(epoch_row.holdout_mae) << ','
        << fmt_double(epoch_row.holdout_spearman) << '\n';
  }
}

void ModelParams::write_csv(std::ostream& out) const {
  out << "param,row,col,value\n";
  out << "config.feature_dim,0,0," << feature_dim << '\n';
  out << "config.hidden_width,0,0," << hidden_width << '\n';
  out << "config.focal_length_px,0,0," << fmt_double(focal_length_px) << '\n';
  for (std::size_t h = 0; h < kHeadCount; ++h) {
    const Head& head = heads[h];
    const std::string& name = kHeadNames[h];
    if (hidden_width > 0) {
      for (int i = 0; i < head.w1.rows; ++i) {
        for (int j = 0; j < head.w1.cols; ++j) {
          out << name << ".w1," << i << ',' << j << ','
              << fmt_double(head.w1.at(i, j)) << '\n';
        }
      }
      for (std::size_t j = 0; j < head.b1.size(); ++j) {
        out << name << ".b1," << j << ",0," << fmt_double(head.b1[j]) << '\n';
      }
    }
    for (int i = 0; i < head.w.rows; ++i) {
      for (int j = 0; j < head.w.cols; ++j) {
        out << name << ".w," << i << ',' << j << ','
            << fmt_double(head.w.at(i, j)) << '\n';
      }
    }
    for (std::size_t j = 0; j < head.b.size(); ++j) {
      out << name << ".b," << j << ",0," << fmt_double(head.b[j]) << '\n';
    }
  }
}

ModelParams ModelParams::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "param,row,col,value") {
    throw std::invalid_argument("checkpoint CSV must start with header "
                                "'param,row,col,value'");
  }
  struct Cell {
    int row;
    int col;
    double value;
  };
  std::map<std::string, std::vector<Cell>> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) {
      throw std::invalid_argument("checkpoint CSV row needs 4 cells: " + line);
    }
    cells[fields[0]].push_back(Cell{static_cast<int>(parse_int(fields[1])),
                                    static_cast<int>(parse_int(fields[2])),
                                    parse_double(fields[3])});
  }

  auto scalar = [&cells](const std::string& name) {
    auto it = cells.find(name);
    if (it == cells.end() || it->second.size() != 1) {
      throw std::invalid_argument("checkpoint missing scalar " + name);
    }
    return it->second.front().value;
  };
  ModelParams p;
  p.feature_dim = static_cast<int>(scalar("config.feature_dim"));
  p.hidden_width = static_cast<int>(scalar("config.hidden_width"));
  p.focal_length_px = scalar("config.focal_length_px");
  if (p.feature_dim < 1 || p.hidden_width < 0 || !(p.focal_length_px > 0.0)) {
    throw std::invalid_argument("checkpoint config values out of range");
  }

  auto fill_matrix = [&cells](const std::string& name, int rows, int cols,
                              Matrix& m) {
    m = Matrix(rows, cols);
    auto it = cells.find(name);
    if (it == cells.end() ||
        it->second.size() != static_cast<std::size_t>(rows) * cols) {
      throw std::invalid_argument("checkpoint array " + name +
                                  " has wrong cell count");
    }
    std::vector<char> seen(static_cast<std::size_t>(rows) * cols, 0);
    for (const auto& c : it->second) {
      if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols) {
        throw std::invalid_argument("checkpoint array " + name +
                                    " has out-of-range index");
      }
      const auto flat =
          static_cast<std::size_t>(c.row) * static_cast<std::size_t>(cols) +
          static_cast<std::size_t>(c.col);
      if (seen[flat]) {
        throw std::invalid_argument("checkpoint array " + name +
                                    " has duplicate cell");
      }
      seen[flat] = 1;
      m.at(c.row, c.col) = c.value;
    }
  };
  auto fill_vector = [&fill_matrix](const std::string& name, int size,
                                    std::vector<double>& v) {
    Matrix m;
    fill_matrix(name, size, 1, m);
    v = m.a;
  };

  for (std::size_t h = 0; h < kHeadCount; ++h) {
    const std::string& name = kHeadNames[h];
    const int out = kHeadOutDims[h];
    Head& head = p.heads[h];
    const int in = p.hidden_width > 0 ? p.hidden_width : p.feature_dim;
    if (p.hidden_width > 0) {
      fill_matrix(name + ".w1", p.feature_dim, p.hidden_width, head.w1);
      fill_vector(name + ".b1", p.hidden_width, head.b1);
    }
    fill_matrix(name + ".w", in, out, head.w);
    fill_vector(name + ".b", out, head.b);
  }
  return p;
}

}  // namespace gupkit
