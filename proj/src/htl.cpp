#include "gupkit/htl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gupkit/io.hpp"

namespace gupkit {

namespace {

const std::array<std::string, kTaskCount> kTaskNames = {
    "heatmap", "offset2d", "size2d", "angle", "offset3d", "size3d", "depth",
};

std::size_t idx(TaskId task) { return static_cast<std::size_t>(task); }

}  // namespace

const std::string& task_name(TaskId task) { return kTaskNames[idx(task)]; }

TaskId task_from_name(const std::string& name) {
  for (TaskId task : kAllTasks) {
    if (kTaskNames[idx(task)] == name) return task;
  }
  throw std::invalid_argument("unknown task name: '" + name + "'");
}

int task_stage(TaskId task) {
  switch (task) {
    case TaskId::Heatmap:
    case TaskId::Offset2D:
    case TaskId::Size2D:
      return 1;
    case TaskId::Angle:
    case TaskId::Offset3D:
    case TaskId::Size3D:
      return 2;
    case TaskId::Depth:
      return 3;
  }
  throw std::invalid_argument("invalid TaskId");
}

TaskGraph default_task_graph() {
  TaskGraph g;
  const std::vector<TaskId> stage1 = {TaskId::Heatmap, TaskId::Offset2D,
                                      TaskId::Size2D};
  g.pre_tasks[idx(TaskId::Angle)] = stage1;
  g.pre_tasks[idx(TaskId::Offset3D)] = stage1;
  g.pre_tasks[idx(TaskId::Size3D)] = stage1;
  g.pre_tasks[idx(TaskId::Depth)] = {TaskId::Heatmap, TaskId::Offset2D,
                                     TaskId::Size2D, TaskId::Size3D};
  return g;
}

void LossHistory::append(const std::map<TaskId, double>& epoch_losses) {
  if (epoch_losses.size() != kTaskCount) {
    throw std::invalid_argument("epoch losses must cover all " +
                                std::to_string(kTaskCount) + " tasks");
  }
  for (TaskId task : kAllTasks) {
    auto it = epoch_losses.find(task);
    if (it == epoch_losses.end()) {
      throw std::invalid_argument("epoch losses missing task " +
                                  task_name(task));
    }
    series_[idx(task)].push_back(it->second);
  }
}

double LossHistory::loss(TaskId task, int epoch) const {
  const auto& s = series_[idx(task)];
  if (epoch < 1 || epoch > static_cast<int>(s.size())) {
    throw std::out_of_range("loss history has " + std::to_string(s.size()) +
                            " epochs, requested epoch " +
                            std::to_string(epoch));
  }
  return s[static_cast<std::size_t>(epoch - 1)];
}

ScheduleConfig::ScheduleConfig(int total_epochs_in, int window_in)
    : total_epochs(total_epochs_in), window(window_in) {
  if (!(total_epochs >= window && window >= 1)) {
    throw std::invalid_argument("ScheduleConfig requires T >= K >= 1");
  }
}

double loss_derivative(const LossHistory& h, TaskId task, int t) {
  if (t < 2) {
    throw std::out_of_range("loss derivative needs t >= 2, got " +
                            std::to_string(t));
  }
  return h.loss(task, t) - h.loss(task, t - 1);
}

double df(const LossHistory& h, TaskId task, int t, int window) {
  if (t - window < 2) {
    throw std::out_of_range("df window [" + std::to_string(t - window) + "," +
                            std::to_string(t - 1) +
                            "] reaches below the first derivative epoch");
  }
  double acc = 0.0;
  for (int that = t - window; that <= t - 1; ++that) {
    acc += std::abs(loss_derivative(h, task, that));
  }
  return acc / window;
}

double df_baseline(const LossHistory& h, TaskId task, int window) {
  return df(h, task, window + 2, window);
}

double ls(const LossHistory& h, TaskId task, int t,
          const ScheduleConfig& cfg) {
  // No full recent window before K+2 (and the spec's "nothing counts as
  // learned before the opening window exists" rule for t <= K).
  if (t < cfg.window + 2) return 0.0;
  if (h.epochs() < t - 1) {
    throw std::out_of_range("loss history covers " +
                            std::to_string(h.epochs()) +
                            " epochs, ls needs history through " +
                            std::to_string(t - 1));
  }
  const double base = df_baseline(h, task, cfg.window);
  if (base == 0.0) {
    warn("task " + task_name(task) +
         " has a flat opening loss trend; treating as not learning (ls=0)");
    return 0.0;
  }
  const double raw = (base - df(h, task, t, cfg.window)) / base;
  return std::clamp(raw, 0.0, 1.0);
}

double alpha(const TaskGraph& g, const LossHistory& h, TaskId task, int t,
             const ScheduleConfig& cfg) {
  double product = 1.0;
  for (TaskId pre : g.pre(task)) {
    product *= ls(h, pre, t, cfg);
  }
  return product;
}

double weight(TaskId, int t, const ScheduleConfig& cfg, double alpha_value) {
  if (t < 1 || t > cfg.total_epochs) {
    throw std::out_of_range("epoch " + std::to_string(t) +
                            " outside [1," + std::to_string(cfg.total_epochs) +
                            "]");
  }
  return std::pow(static_cast<double>(t) / cfg.total_epochs,
                  1.0 - alpha_value);
}

WeightedTotal weighted_total(const std::map<TaskId, double>& losses,
                             const std::map<TaskId, double>& weights) {
  if (losses.size() != weights.size()) {
    throw std::invalid_argument("losses and weights key sets differ in size");
  }
  WeightedTotal out{0.0, {}};
  for (const auto& [task, loss] : losses) {
    auto it = weights.find(task);
    if (it == weights.end()) {
      throw std::invalid_argument("no weight for task " + task_name(task));
    }
    const double term = it->second * loss;
    out.terms[task] = term;
    out.total += term;
  }
  return out;
}

HtlScheduler::HtlScheduler(TaskGraph graph, ScheduleConfig cfg)
    : graph_(std::move(graph)), cfg_(cfg), current_weights_(weights_for(1)) {}

std::map<TaskId, double> HtlScheduler::weights_for(int t) const {
  std::map<TaskId, double> w;
  for (TaskId task : kAllTasks) {
    w[task] = weight(task, t, cfg_, alpha(graph_, history_, task, t, cfg_));
  }
  return w;
}

const std::map<TaskId, double>& HtlScheduler::step(
    int t, const std::map<TaskId, double>& epoch_losses) {
  if (t != history_.epochs() + 1) {
    throw std::logic_error("scheduler expects epoch " +
                           std::to_string(history_.epochs() + 1) + ", got " +
                           std::to_string(t));
  }
  for (TaskId task : kAllTasks) {
    HtlTraceRow row{};
    row.epoch = t;
    row.task = task;
    row.loss = epoch_losses.at(task);
    row.df = (t >= cfg_.window + 2) ? df(history_, task, t, cfg_.window) : 0.0;
    row.ls = ls(history_, task, t, cfg_);
    row.alpha = alpha(graph_, history_, task, t, cfg_);
    row.weight = current_weights_.at(task);
    trace_.push_back(row);
  }
  history_.append(epoch_losses);
  current_weights_ = weights_for(std::min(t + 1, cfg_.total_epochs));
  return current_weights_;
}

void HtlScheduler::write_trace_csv(std::ostream& out) const {
  out << "epoch,task,loss,df,ls,alpha,weight\n";
  for (const auto& row : trace_) {
    out << row.epoch << ',' << task_name(row.task) << ','
        << fmt_double(row.loss) << ',' << fmt_double(row.df) << ','
        << fmt_double(row.ls) << ',' << fmt_double(row.alpha) << ','
        << fmt_double(row.weight) << '\n';
  }
}

}  // namespace gupkit
