#include "gupkit/run_config.hpp"

#include <stdexcept>

#include <json.hpp>

#include "gupkit/io.hpp"

namespace gupkit {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const char* section,
                         std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("unknown key '" + key + "' in " + section);
    }
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) {
    out = it->get<T>();
  }
}

void parse_scene(const json& obj, SceneConfig& scene) {
  reject_unknown_keys(obj, "scene",
                      {"n_objects", "focal_length_px", "depth_range_m",
                       "h3d_mean_m", "h3d_std_m", "h2d_noise_px",
                       "feature_dim", "label_noise_m", "seed"});
  read_field(obj, "n_objects", scene.n_objects);
  read_field(obj, "focal_length_px", scene.focal_length_px);
  if (auto it = obj.find("depth_range_m"); it != obj.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw std::invalid_argument("scene.depth_range_m must be [min, max]");
    }
    scene.depth_min_m = (*it)[0].get<double>();
    scene.depth_max_m = (*it)[1].get<double>();
  }
  read_field(obj, "h3d_mean_m", scene.h3d_mean_m);
  read_field(obj, "h3d_std_m", scene.h3d_std_m);
  read_field(obj, "h2d_noise_px", scene.h2d_noise_px);
  read_field(obj, "feature_dim", scene.feature_dim);
  read_field(obj, "label_noise_m", scene.label_noise_m);
  read_field(obj, "seed", scene.seed);
}

void parse_train(const json& obj, TrainConfig& train) {
  reject_unknown_keys(
      obj, "train",
      {"total_epochs", "window", "learning_rate", "lr_decay_epochs",
       "lr_decay_factor", "warmup_epochs", "batch_size", "seed", "scheduler",
       "hidden_layer", "hidden_width", "train_fraction"});
  read_field(obj, "total_epochs", train.total_epochs);
  read_field(obj, "window", train.window);
  read_field(obj, "learning_rate", train.learning_rate);
  read_field(obj, "lr_decay_epochs", train.lr_decay_epochs);
  read_field(obj, "lr_decay_factor", train.lr_decay_factor);
  read_field(obj, "warmup_epochs", train.warmup_epochs);
  read_field(obj, "batch_size", train.batch_size);
  read_field(obj, "seed", train.seed);
  if (auto it = obj.find("scheduler"); it != obj.end()) {
    const auto name = it->get<std::string>();
    if (name == "htl") {
      train.scheduler = SchedulerMode::Htl;
    } else if (name == "constant") {
      train.scheduler = SchedulerMode::Constant;
    } else {
      throw std::invalid_argument("train.scheduler must be 'htl' or 'constant'");
    }
  }
  read_field(obj, "hidden_layer", train.hidden_layer);
  read_field(obj, "hidden_width", train.hidden_width);
  read_field(obj, "train_fraction", train.train_fraction);
}

void parse_eval(const json& obj, EvalConfig& eval) {
  reject_unknown_keys(obj, "eval", {"tau_m", "coverage_level"});
  read_field(obj, "tau_m", eval.tau_m);
  read_field(obj, "coverage_level", eval.coverage_level);
}

}  // namespace

void EvalConfig::validate() const {
  if (!(tau_m > 0.0)) throw std::invalid_argument("eval.tau_m must be > 0");
  if (!(coverage_level > 0.0 && coverage_level < 1.0)) {
    throw std::invalid_argument("eval.coverage_level must lie in (0,1)");
  }
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                e.what());
  }
  if (!root.is_object()) {
    throw std::invalid_argument("config root must be a JSON object");
  }
  reject_unknown_keys(root, "config root",
                      {"scene", "train", "eval", "output_dir"});

  RunConfig cfg;
  try {
    if (root.contains("scene")) parse_scene(root["scene"], cfg.scene);
    if (root.contains("train")) parse_train(root["train"], cfg.train);
    if (root.contains("eval")) parse_eval(root["eval"], cfg.eval);
    if (root.contains("output_dir")) {
      cfg.output_dir = root["output_dir"].get<std::string>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config type error: ") + e.what());
  }
  cfg.scene.validate();
  cfg.train.validate();
  cfg.eval.validate();
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  return from_json_text(read_text_file(path));
}

void RunConfig::override_seed(std::uint64_t seed) {
  scene.seed = seed;
  train.seed = seed;
}

}  // namespace gupkit
