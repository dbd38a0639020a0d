#include "gupkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "gupkit/io.hpp"
#include "gupkit/rng.hpp"

namespace gupkit {

namespace {

constexpr double kPi = 3.141592653589793;

// Spread of the additive Gaussian noise on each feature, in basis units.
// Fixed by the generator (not a scene knob): it sets the irreducible error
// of the regression heads and with it the scale of the depth errors the
// amplification turns into meters.
constexpr double kFeatureNoise = 0.35;

// Smooth basis over the normalized latent pair (u = height z-score,
// v = depth mapped to [-1,1]). The regression targets below are linear
// combinations of these, so they are learnable by a linear head but not
// readable off a single coordinate.
double basis(int k, double u, double v) {
  switch (k) {
    case 0: return u;
    case 1: return v;
    case 2: return v * v;
    case 3: return std::sin(kPi * v);
    case 4: return std::cos(kPi * v);
    case 5: return u * v;
    case 6: return v * v * v;
    case 7: return std::sin(2.0 * kPi * v);
    default: return std::cos((k - 6) * kPi * v);
  }
}

double truncated_normal(CounterRng& rng, double mean, double stddev,
                        double lo, double hi) {
  while (true) {
    const double x = rng.normal(mean, stddev);
    if (x > lo && x < hi) return x;
  }
}

}  // namespace

void SceneConfig::validate() const {
  if (n_objects < 0) throw std::invalid_argument("n_objects must be >= 0");
  if (!(focal_length_px > 0.0))
    throw std::invalid_argument("focal_length_px must be > 0");
  if (!(depth_min_m > 0.0))
    throw std::invalid_argument("depth_min_m must be > 0");
  if (!(depth_min_m < depth_max_m))
    throw std::invalid_argument("depth range must satisfy min < max");
  if (!(h3d_mean_m > 0.0))
    throw std::invalid_argument("h3d_mean_m must be > 0");
  if (!(h3d_std_m > 0.0)) throw std::invalid_argument("h3d_std_m must be > 0");
  if (h2d_noise_px < 0.0)
    throw std::invalid_argument("h2d_noise_px must be >= 0");
  if (feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
  if (label_noise_m < 0.0)
    throw std::invalid_argument("label_noise_m must be >= 0");
}

std::vector<SyntheticObject> generate(const SceneConfig& cfg) {
  cfg.validate();
  std::vector<SyntheticObject> out;
  out.reserve(static_cast<std::size_t>(cfg.n_objects));

  for (int i = 0; i < cfg.n_objects; ++i) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
    SyntheticObject obj;

    obj.depth_gt_m = rng.uniform(cfg.depth_min_m, cfg.depth_max_m);
    obj.h3d_gt_m = truncated_normal(rng, cfg.h3d_mean_m, cfg.h3d_std_m,
                                    0.5 * cfg.h3d_mean_m, 1.5 * cfg.h3d_mean_m);
    obj.h2d_true_px = cfg.focal_length_px * obj.h3d_gt_m / obj.depth_gt_m;
    obj.h2d_obs_px =
        std::max(obj.h2d_true_px + cfg.h2d_noise_px * rng.normal(), 0.5);
    obj.p2d = 0.3 + 0.7 * std::exp(-obj.depth_gt_m / cfg.depth_max_m);

    const double u = (obj.h3d_gt_m - cfg.h3d_mean_m) / cfg.h3d_std_m;
    const double v = 2.0 * (obj.depth_gt_m - cfg.depth_min_m) /
                         (cfg.depth_max_m - cfg.depth_min_m) -
                     1.0;
    obj.features.resize(static_cast<std::size_t>(cfg.feature_dim));
    for (int k = 0; k < cfg.feature_dim; ++k) {
      obj.features[static_cast<std::size_t>(k)] =
          basis(k, u, v) + kFeatureNoise * rng.normal();
    }

    auto set = [&obj](TaskId task, double value) {
      obj.targets[static_cast<std::size_t>(task)] = value;
    };
    set(TaskId::Heatmap, 0.8 * v + 0.2 * std::sin(kPi * v));
    set(TaskId::Offset2D, 0.5 * v * v - 0.3 * v);
    set(TaskId::Size2D, 0.6 * std::cos(kPi * v) + 0.1 * u);
    set(TaskId::Angle, 0.4 * std::sin(kPi * v) + 0.4 * v * v * v);
    set(TaskId::Offset3D, 0.5 * u * v + 0.3 * v);
    // The two metric targets carry the label noise; it is measured in
    // meters, which is meaningless for the dimensionless pseudo-tasks.
    set(TaskId::Size3D, obj.h3d_gt_m + cfg.label_noise_m * rng.normal());
    set(TaskId::Depth, obj.depth_gt_m + cfg.label_noise_m * rng.normal());

    out.push_back(std::move(obj));
  }
  return out;
}

std::pair<std::vector<SyntheticObject>, std::vector<SyntheticObject>> split(
    const std::vector<SyntheticObject>& objects, double train_fraction,
    std::uint64_t seed) {
  if (objects.empty()) {
    throw std::domain_error("cannot split an empty object set");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::domain_error("train_fraction must lie in (0,1), got " +
                            std::to_string(train_fraction));
  }
  std::vector<std::size_t> order(objects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(seed, 0x5B117ull);  // dedicated split stream
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = rng.next_u64() % (i + 1);
    std::swap(order[i], order[j]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(objects.size())));
  std::pair<std::vector<SyntheticObject>, std::vector<SyntheticObject>> out;
  out.first.reserve(n_train);
  out.second.reserve(objects.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? out.first : out.second).push_back(objects[order[i]]);
  }
  return out;
}

void write_dataset_csv(std::ostream& out,
                       const std::vector<SyntheticObject>& objects,
                       int feature_dim) {
  out << "idx,h3d_gt,depth_gt,h2d_true,h2d_obs,p2d";
  for (int k = 0; k < feature_dim; ++k) out << ",f" << k;
  for (TaskId task : kAllTasks) out << ",t_" << task_name(task);
  out << '\n';
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto& obj = objects[i];
    out << i << ',' << fmt_double(obj.h3d_gt_m) << ','
        << fmt_double(obj.depth_gt_m) << ',' << fmt_double(obj.h2d_true_px)
        << ',' << fmt_double(obj.h2d_obs_px) << ',' << fmt_double(obj.p2d);
    for (double f : obj.features) out << ',' << fmt_double(f);
    for (TaskId task : kAllTasks) out << ',' << fmt_double(obj.target(task));
    out << '\n';
  }
}

std::vector<SyntheticObject> read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("dataset CSV is empty (no header)");
  }
  const auto header = split_csv_line(line);
  const std::vector<std::string> prefix = {"idx",      "h3d_gt", "depth_gt",
                                           "h2d_true", "h2d_obs", "p2d"};
  if (header.size() < prefix.size() + kTaskCount + 1) {
    throw std::invalid_argument("dataset CSV header too short");
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (header[i] != prefix[i]) {
      throw std::invalid_argument("dataset CSV column " + std::to_string(i) +
                                  " must be '" + prefix[i] + "', got '" +
                                  header[i] + "'");
    }
  }
  const int feature_dim =
      static_cast<int>(header.size() - prefix.size() - kTaskCount);
  for (int k = 0; k < feature_dim; ++k) {
    const auto& name = header[prefix.size() + static_cast<std::size_t>(k)];
    if (name != "f" + std::to_string(k)) {
      throw std::invalid_argument("dataset CSV feature column mismatch: '" +
                                  name + "'");
    }
  }
  for (std::size_t t = 0; t < kTaskCount; ++t) {
    const auto& name =
        header[prefix.size() + static_cast<std::size_t>(feature_dim) + t];
    const std::string expect = "t_" + task_name(kAllTasks[t]);
    if (name != expect) {
      throw std::invalid_argument("dataset CSV target column must be '" +
                                  expect + "', got '" + name + "'");
    }
  }

  std::vector<SyntheticObject> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::invalid_argument("dataset CSV row has " +
                                  std::to_string(cells.size()) +
                                  " cells, expected " +
                                  std::to_string(header.size()));
    }
    SyntheticObject obj;
    obj.h3d_gt_m = parse_double(cells[1]);
    obj.depth_gt_m = parse_double(cells[2]);
    obj.h2d_true_px = parse_double(cells[3]);
    obj.h2d_obs_px = parse_double(cells[4]);
    obj.p2d = parse_double(cells[5]);
    obj.features.resize(static_cast<std::size_t>(feature_dim));
    for (int k = 0; k < feature_dim; ++k) {
      obj.features[static_cast<std::size_t>(k)] =
          parse_double(cells[6 + static_cast<std::size_t>(k)]);
    }
    for (std::size_t t = 0; t < kTaskCount; ++t) {
      obj.targets[t] = parse_double(
          cells[6 + static_cast<std::size_t>(feature_dim) + t]);
    }
    out.push_back(std::move(obj));
  }
  return out;
}

}  // namespace gupkit
