#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gupkit/run_config.hpp"

namespace gupkit {

/// Shared CLI context: the --seed / GUPKIT_SEED override and the
/// --deterministic switch that suppresses timestamps in JSON reports.
struct CliContext {
  std::optional<std::uint64_t> seed_override;
  bool deterministic = false;
};

struct AmplifyOptions {
  double focal_px = 707.0;
  double h3d_m = 1.5;
  double depth_min_m = 5.0;
  double depth_max_m = 80.0;
  double jitter_m = 0.1;
  double step_m = 1.0;
  std::string out_dir;
};

/// Sweep depth, writing amplify.csv (depth,h2d,gain,shift_plus,shift_minus)
/// and amplify.svg (true vs. jitter-shifted depth).
void cmd_amplify(const AmplifyOptions& opts);

void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  const CliContext& ctx);

void cmd_train(const std::string& config_path,
               const std::optional<std::string>& scheduler_override,
               const std::string& out_dir, const CliContext& ctx);

void cmd_eval(const std::string& checkpoint_path,
              const std::string& dataset_path, const std::string& out_dir,
              const std::optional<std::string>& config_path,
              const CliContext& ctx);

void cmd_compare(const std::string& config_path, int n_seeds,
                 const std::string& out_dir, const CliContext& ctx);

}  // namespace gupkit
