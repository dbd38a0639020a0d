#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gupkit/synth.hpp"
#include "gupkit/trainer.hpp"

namespace gupkit {

struct EvalConfig {
  double tau_m = 2.0;           // |mu_d - d_gt| below this counts as correct
  double coverage_level = 0.9;

  void validate() const;
};

/// JSON run configuration with sections scene, train, eval and an
/// output_dir. Every section is optional and falls back to the documented
/// defaults; unknown keys anywhere are rejected.
struct RunConfig {
  SceneConfig scene;
  TrainConfig train;
  EvalConfig eval;
  std::string output_dir = "out";

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);

  /// Route every random stream through one seed (the CLI --seed /
  /// GUPKIT_SEED override).
  void override_seed(std::uint64_t seed);
};

}  // namespace gupkit
