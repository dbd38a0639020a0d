#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace gupkit {

/// The seven training tasks, grouped in three stages:
/// stage 1 (2D detection): Heatmap, Offset2D, Size2D;
/// stage 2 (basic 3D): Angle, Offset3D, Size3D;
/// stage 3: Depth.
enum class TaskId {
  Heatmap = 0,
  Offset2D,
  Size2D,
  Angle,
  Offset3D,
  Size3D,
  Depth,
};

inline constexpr std::size_t kTaskCount = 7;
inline constexpr std::array<TaskId, kTaskCount> kAllTasks = {
    TaskId::Heatmap, TaskId::Offset2D, TaskId::Size2D,  TaskId::Angle,
    TaskId::Offset3D, TaskId::Size3D,  TaskId::Depth,
};

const std::string& task_name(TaskId task);
TaskId task_from_name(const std::string& name);
int task_stage(TaskId task);

/// Pre-task dependency sets. Stage-1 tasks have no pre-tasks; stage-2
/// tasks depend on all of stage 1; Depth depends on the 2D tasks plus
/// Size3D (the two heights the projection consumes).
struct TaskGraph {
  std::array<std::vector<TaskId>, kTaskCount> pre_tasks;

  const std::vector<TaskId>& pre(TaskId task) const {
    return pre_tasks[static_cast<std::size_t>(task)];
  }
};

TaskGraph default_task_graph();

/// Append-only per-task record of epoch-mean losses; epochs are 1-based.
class LossHistory {
 public:
  void append(const std::map<TaskId, double>& epoch_losses);
  double loss(TaskId task, int epoch) const;  // throws std::out_of_range
  int epochs() const { return static_cast<int>(series_[0].size()); }

 private:
  std::array<std::vector<double>, kTaskCount> series_;
};

struct ScheduleConfig {
  int total_epochs;  // T
  int window;        // K

  ScheduleConfig(int total_epochs, int window);
};

/// Backward difference L(t) - L(t-1); defined for t >= 2.
double loss_derivative(const LossHistory& h, TaskId task, int t);

/// Mean of |L'| over the K epochs t-K .. t-1. Every derivative in the
/// window must exist, so t - K >= 2 is required.
double df(const LossHistory& h, TaskId task, int t, int window);

/// Mean |L'| over the opening window t_hat in [2, K+1] — the earliest
/// full window, used as the reference trend the indicator compares
/// against. (The derivative at epoch 1 does not exist, so the reference
/// cannot start lower.)
double df_baseline(const LossHistory& h, TaskId task, int window);

/// Learning-situation indicator in [0,1]: how much the recent loss trend
/// has flattened relative to the opening trend. 0 until a full recent
/// window exists (t < K+2); 0 with a warning when the opening trend is
/// exactly flat (a dead task is not a converged one); clamped because a
/// loss can steepen past its opening trend.
double ls(const LossHistory& h, TaskId task, int t, const ScheduleConfig& cfg);

/// Product of ls over the task's pre-tasks; empty product is 1.
double alpha(const TaskGraph& g, const LossHistory& h, TaskId task, int t,
             const ScheduleConfig& cfg);

/// Polynomial time-scheduled weight (t/T)^(1-alpha), t in [1, T].
double weight(TaskId task, int t, const ScheduleConfig& cfg, double alpha);

struct WeightedTotal {
  double total;
  std::map<TaskId, double> terms;  // weight * loss per task
};

/// Dot product of losses and weights over identical key sets; throws
/// std::invalid_argument when the key sets differ.
WeightedTotal weighted_total(const std::map<TaskId, double>& losses,
                             const std::map<TaskId, double>& weights);

struct HtlTraceRow {
  int epoch;
  TaskId task;
  double loss;
  double df;      // 0 while the recent window is incomplete
  double ls;
  double alpha;
  double weight;  // weight applied at this epoch
};

/// Stateful per-epoch orchestration. Weights for epoch 1 are available at
/// construction; step(t, losses) records epoch t and returns the weights
/// for epoch t+1 (capped at T, where every weight is 1).
class HtlScheduler {
 public:
  HtlScheduler(TaskGraph graph, ScheduleConfig cfg);

  const std::map<TaskId, double>& current_weights() const {
    return current_weights_;
  }

  /// Epochs must arrive in order starting at 1; otherwise throws
  /// std::logic_error.
  const std::map<TaskId, double>& step(
      int t, const std::map<TaskId, double>& epoch_losses);

  const LossHistory& history() const { return history_; }
  const ScheduleConfig& config() const { return cfg_; }
  const TaskGraph& graph() const { return graph_; }
  const std::vector<HtlTraceRow>& trace() const { return trace_; }

  /// CSV with header epoch,task,loss,df,ls,alpha,weight.
  void write_trace_csv(std::ostream& out) const;

 private:
  std::map<TaskId, double> weights_for(int t) const;

  TaskGraph graph_;
  ScheduleConfig cfg_;
  LossHistory history_;
  std::map<TaskId, double> current_weights_;
  std::vector<HtlTraceRow> trace_;
};

}  // namespace gupkit
