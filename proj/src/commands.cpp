#include "gupkit/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gupkit/eval.hpp"
#include "gupkit/io.hpp"
#include "gupkit/svg.hpp"

namespace gupkit {

namespace {

namespace fs = std::filesystem;

std::string prepare_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) {
    throw std::invalid_argument("output directory must not be empty");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + out_dir +
                             "': " + ec.message());
  }
  return out_dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunConfig load_config(const std::string& config_path, const CliContext& ctx) {
  if (config_path.empty()) {
    throw std::invalid_argument("missing --config");
  }
  RunConfig cfg = RunConfig::from_json_file(config_path);
  if (ctx.seed_override) cfg.override_seed(*ctx.seed_override);
  return cfg;
}

struct RunArtifacts {
  TrainResult result;
  CameraModel cam;
};

RunArtifacts run_training(const RunConfig& cfg) {
  const auto objects = generate(cfg.scene);
  auto [train_set, holdout_set] =
      split(objects, cfg.train.train_fraction, cfg.scene.seed);
  const CameraModel cam(cfg.scene.focal_length_px);
  return RunArtifacts{train(cfg.train, cam, train_set, holdout_set), cam};
}

std::vector<SvgPanel> training_panels(const TrainTrace& trace) {
  SvgPanel losses{"training loss per task", "epoch", "epoch-mean loss", {}, false};
  SvgPanel weights{"loss weight per task", "epoch", "weight", {}, false};
  const auto& palette = svg_palette();
  for (TaskId task : kAllTasks) {
    SvgSeries loss_series{task_name(task),
                          palette[static_cast<std::size_t>(task)], {}, {}};
    SvgSeries weight_series = loss_series;
    for (const auto& row : trace.task_rows) {
      if (row.task != task) continue;
      loss_series.xs.push_back(row.epoch);
      loss_series.ys.push_back(row.loss);
      weight_series.xs.push_back(row.epoch);
      weight_series.ys.push_back(row.weight);
    }
    losses.series.push_back(std::move(loss_series));
    weights.series.push_back(std::move(weight_series));
  }
  return {losses, weights};
}

double lower_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

EvalReport evaluate_model(const ModelParams& params,
                          const std::vector<SyntheticObject>& objects,
                          const EvalConfig& eval_cfg) {
  std::vector<std::pair<double, double>> mu_gt;
  std::vector<std::pair<LaplaceDist, double>> dist_gt;
  std::vector<double> sigmas, abserrs, scores;
  std::vector<char> correct;
  mu_gt.reserve(objects.size());
  for (const auto& obj : objects) {
    const ObjectForward f = forward(params, obj);
    const double gt = obj.target(TaskId::Depth);
    const double err = std::abs(f.depth.depth_dist.mu - gt);
    mu_gt.emplace_back(f.depth.depth_dist.mu, gt);
    dist_gt.emplace_back(f.depth.depth_dist, gt);
    sigmas.push_back(f.depth.depth_dist.sigma);
    abserrs.push_back(err);
    scores.push_back(f.p3d);
    correct.push_back(err < eval_cfg.tau_m ? 1 : 0);
  }
  EvalReport report{};
  report.depth_mae_m = depth_mae(mu_gt);
  report.spearman_sigma_vs_abserr = spearman(sigmas, abserrs);
  report.interval_coverage_90 = coverage(dist_gt, eval_cfg.coverage_level);
  report.confidence_auroc = confidence_auroc(scores, correct);
  report.n_objects = static_cast<std::int64_t>(objects.size());
  return report;
}

}  // namespace

void cmd_amplify(const AmplifyOptions& opts) {
  if (!(opts.focal_px > 0.0)) throw std::invalid_argument("--focal must be > 0");
  if (!(opts.h3d_m > 0.0)) throw std::invalid_argument("--h3d must be > 0");
  if (!(opts.depth_min_m > 0.0)) {
    throw std::invalid_argument("--depth-min must be > 0");
  }
  if (!(opts.depth_min_m <= opts.depth_max_m)) {
    throw std::invalid_argument("--depth-min must be <= --depth-max");
  }
  if (opts.jitter_m < 0.0) throw std::invalid_argument("--jitter must be >= 0");
  if (!(opts.step_m > 0.0)) throw std::invalid_argument("--step must be > 0");
  const std::string dir = prepare_out_dir(opts.out_dir);

  const CameraModel cam(opts.focal_px);
  std::ostringstream csv;
  csv << "depth,h2d,gain,shift_plus,shift_minus\n";
  SvgSeries base{"true depth", "#2ca02c", {}, {}};
  SvgSeries plus{"+jitter", "#1f77b4", {}, {}};
  SvgSeries minus{"-jitter", "#d62728", {}, {}};

  const int steps = static_cast<int>(
      std::floor((opts.depth_max_m - opts.depth_min_m) / opts.step_m + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double depth = opts.depth_min_m + i * opts.step_m;
    const double h2d = project_height(cam, opts.h3d_m, depth);
    const double gain = amplification_gain(cam, h2d);
    const double shift_plus = depth_shift(cam, h2d, opts.jitter_m);
    const double shift_minus = depth_shift(cam, h2d, -opts.jitter_m);
    csv << fmt_double(depth) << ',' << fmt_double(h2d) << ','
        << fmt_double(gain) << ',' << fmt_double(shift_plus) << ','
        << fmt_double(shift_minus) << '\n';
    base.xs.push_back(depth);
    base.ys.push_back(depth);
    plus.xs.push_back(depth);
    plus.ys.push_back(depth + shift_plus);
    minus.xs.push_back(depth);
    minus.ys.push_back(depth + shift_minus);
  }
  write_text_file(join(dir, "amplify.csv"), csv.str());

  SvgPanel panel{"depth shift under a fixed 3D-height jitter", "true depth (m)",
                 "projected depth (m)", {base, plus, minus}, false};
  write_text_file(join(dir, "amplify.svg"), render_svg({panel}));
}

void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  const CliContext& ctx) {
  const RunConfig cfg = load_config(config_path, ctx);
  const std::string dir = prepare_out_dir(out_dir);
  const auto objects = generate(cfg.scene);
  std::ostringstream csv;
  write_dataset_csv(csv, objects, cfg.scene.feature_dim);
  write_text_file(join(dir, "dataset.csv"), csv.str());
}

void cmd_train(const std::string& config_path,
               const std::optional<std::string>& scheduler_override,
               const std::string& out_dir, const CliContext& ctx) {
  RunConfig cfg = load_config(config_path, ctx);
  if (scheduler_override) {
    if (*scheduler_override == "htl") {
      cfg.train.scheduler = SchedulerMode::Htl;
    } else if (*scheduler_override == "constant") {
      cfg.train.scheduler = SchedulerMode::Constant;
    } else {
      throw std::invalid_argument("--scheduler must be htl or constant");
    }
  }
  const std::string dir = prepare_out_dir(out_dir);

  const RunArtifacts run = run_training(cfg);

  std::ostringstream trace_csv;
  run.result.trace.write_csv(trace_csv);
  write_text_file(join(dir, "trace.csv"), trace_csv.str());

  std::ostringstream model_csv;
  run.result.params.write_csv(model_csv);
  write_text_file(join(dir, "model.csv"), model_csv.str());

  write_text_file(join(dir, "curves.svg"),
                  render_svg(training_panels(run.result.trace)));
}

void cmd_eval(const std::string& checkpoint_path,
              const std::string& dataset_path, const std::string& out_dir,
              const std::optional<std::string>& config_path,
              const CliContext& ctx) {
  EvalConfig eval_cfg;
  if (config_path) {
    eval_cfg = RunConfig::from_json_file(*config_path).eval;
  }
  const std::string dir = prepare_out_dir(out_dir);

  std::ifstream checkpoint_in(checkpoint_path);
  if (!checkpoint_in) {
    throw std::invalid_argument("cannot open checkpoint: " + checkpoint_path);
  }
  const ModelParams params = ModelParams::read_csv(checkpoint_in);

  std::ifstream dataset_in(dataset_path);
  if (!dataset_in) {
    throw std::invalid_argument("cannot open dataset: " + dataset_path);
  }
  const auto objects = read_dataset_csv(dataset_in);
  if (objects.empty()) {
    throw std::invalid_argument("dataset is empty: " + dataset_path);
  }
  if (static_cast<int>(objects.front().features.size()) != params.feature_dim) {
    throw std::invalid_argument(
        "dataset feature_dim " +
        std::to_string(objects.front().features.size()) +
        " does not match checkpoint feature_dim " +
        std::to_string(params.feature_dim));
  }

  const EvalReport report = evaluate_model(params, objects, eval_cfg);
  write_text_file(join(dir, "report.json"),
                  report_to_json(report,
                                 ctx.deterministic ? "" : iso8601_now()));
}

void cmd_compare(const std::string& config_path, int n_seeds,
                 const std::string& out_dir, const CliContext& ctx) {
  if (n_seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  const RunConfig base_cfg = load_config(config_path, ctx);
  const std::string dir = prepare_out_dir(out_dir);

  struct Arm {
    SchedulerMode mode;
    std::string name;
    std::string color;
    std::vector<double> maes;
  };
  std::vector<Arm> arms = {
      {SchedulerMode::Htl, "htl", "#1f77b4", {}},
      {SchedulerMode::Constant, "constant", "#ff7f0e", {}},
  };

  std::ostringstream csv;
  csv << "arm,seed,holdout_mae\n";
  for (auto& arm : arms) {
    for (int i = 0; i < n_seeds; ++i) {
      RunConfig cfg = base_cfg;
      const std::uint64_t seed = base_cfg.scene.seed + static_cast<std::uint64_t>(i);
      cfg.override_seed(seed);
      cfg.train.scheduler = arm.mode;
      const RunArtifacts run = run_training(cfg);
      arm.maes.push_back(run.result.final_holdout_mae);
      csv << arm.name << ',' << seed << ','
          << fmt_double(run.result.final_holdout_mae) << '\n';
    }
  }
  for (const auto& arm : arms) {
    csv << arm.name << ",median," << fmt_double(lower_median(arm.maes)) << '\n';
  }
  write_text_file(join(dir, "compare.csv"), csv.str());

  std::vector<SvgScatterGroup> groups;
  for (const auto& arm : arms) {
    groups.push_back(SvgScatterGroup{arm.name, arm.color, arm.maes});
  }
  write_text_file(join(dir, "compare.svg"),
                  render_scatter_svg("holdout depth MAE by scheduler",
                                     "holdout MAE (m)", groups));
}

}  // namespace gupkit
