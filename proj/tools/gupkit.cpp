#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gupkit/commands.hpp"
#include "gupkit/trainer.hpp"

namespace {

// 0 success, 2 usage/config error, 3 runtime divergence.
constexpr int kExitUsage = 2;
constexpr int kExitDivergence = 3;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("GUPKIT_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    return std::stoull(raw);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("GUPKIT_SEED is not an integer: ") +
                                raw);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic benchmark for uncertainty-aware depth projection "
               "and hierarchical loss scheduling"};
  app.require_subcommand(1);

  bool deterministic = false;
  std::optional<std::uint64_t> seed_flag;
  app.add_flag("--deterministic", deterministic,
               "suppress timestamps so outputs are byte-identical");
  app.add_option("--seed", seed_flag,
                 "override every config seed (GUPKIT_SEED is the fallback)");

  gupkit::AmplifyOptions amplify;
  auto* amplify_cmd =
      app.add_subcommand("amplify", "depth-shift sweep for a fixed height jitter");
  amplify_cmd->add_option("--focal", amplify.focal_px, "focal length (px)");
  amplify_cmd->add_option("--h3d", amplify.h3d_m, "object 3D height (m)");
  amplify_cmd->add_option("--depth-min", amplify.depth_min_m, "sweep start (m)");
  amplify_cmd->add_option("--depth-max", amplify.depth_max_m, "sweep end (m)");
  amplify_cmd->add_option("--jitter", amplify.jitter_m, "height jitter (m)");
  amplify_cmd->add_option("--step", amplify.step_m, "sweep step (m)");
  amplify_cmd->add_option("--out", amplify.out_dir, "output directory")
      ->required();

  std::string sim_config, sim_out;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "generate a synthetic dataset CSV");
  simulate_cmd->add_option("--config", sim_config, "run configuration JSON")
      ->required();
  simulate_cmd->add_option("--out", sim_out, "output directory")->required();

  std::string train_config, train_out;
  std::string train_scheduler;
  auto* train_cmd = app.add_subcommand("train", "train the multi-task model");
  train_cmd->add_option("--config", train_config, "run configuration JSON")
      ->required();
  train_cmd->add_option("--scheduler", train_scheduler,
                        "htl or constant (overrides the config)");
  train_cmd->add_option("--out", train_out, "output directory")->required();

  std::string eval_checkpoint, eval_dataset, eval_out, eval_config;
  auto* eval_cmd =
      app.add_subcommand("eval", "evaluate a checkpoint on a dataset CSV");
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "model checkpoint CSV")
      ->required();
  eval_cmd->add_option("--dataset", eval_dataset, "dataset CSV")->required();
  eval_cmd->add_option("--config", eval_config,
                       "run configuration JSON (eval section only)");
  eval_cmd->add_option("--out", eval_out, "output directory")->required();

  std::string compare_config, compare_out;
  int compare_seeds = 5;
  auto* compare_cmd = app.add_subcommand(
      "compare", "train htl and constant arms over a seed sweep");
  compare_cmd->add_option("--config", compare_config, "run configuration JSON")
      ->required();
  compare_cmd->add_option("--seeds", compare_seeds, "number of seeds");
  compare_cmd->add_option("--out", compare_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    gupkit::CliContext ctx;
    ctx.deterministic = deterministic;
    ctx.seed_override = seed_flag ? seed_flag : env_seed();

    if (*amplify_cmd) {
      gupkit::cmd_amplify(amplify);
    } else if (*simulate_cmd) {
      gupkit::cmd_simulate(sim_config, sim_out, ctx);
    } else if (*train_cmd) {
      gupkit::cmd_train(train_config,
                        train_scheduler.empty()
                            ? std::nullopt
                            : std::optional<std::string>(train_scheduler),
                        train_out, ctx);
    } else if (*eval_cmd) {
      gupkit::cmd_eval(eval_checkpoint, eval_dataset, eval_out,
                       eval_config.empty()
                           ? std::nullopt
                           : std::optional<std::string>(eval_config),
                       ctx);
    } else if (*compare_cmd) {
      gupkit::cmd_compare(compare_config, compare_seeds, compare_out, ctx);
    }
  } catch (const gupkit::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
