#include "gupkit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "gupkit/io.hpp"

namespace gupkit {

namespace {

/// Average ranks (1-based); tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

bool all_equal(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(),
                            [](double a, double b) { return a != b; }) ==
         v.end();
}

bool any_non_finite(std::span<const double> v) {
  return std::any_of(v.begin(), v.end(),
                     [](double x) { return !std::isfinite(x); });
}

}  // namespace

double depth_mae(std::span<const std::pair<double, double>> preds) {
  if (preds.empty()) {
    throw std::domain_error("depth_mae needs at least one prediction");
  }
  double acc = 0.0;
  for (const auto& [mu, gt] : preds) acc += std::abs(mu - gt);
  return acc / static_cast<double>(preds.size());
}

double spearman(std::span<const double> sigma,
                std::span<const double> abserr) {
  if (sigma.size() != abserr.size()) {
    warn("spearman: length mismatch (" + std::to_string(sigma.size()) +
         " vs " + std::to_string(abserr.size()) + "); returning 0");
    return 0.0;
  }
  if (sigma.size() < 2 || all_equal(sigma) || all_equal(abserr) ||
      any_non_finite(sigma) || any_non_finite(abserr)) {
    warn("spearman: degenerate input; returning 0");
    return 0.0;
  }
  return pearson(average_ranks(sigma), average_ranks(abserr));
}

double coverage(std::span<const std::pair<LaplaceDist, double>> preds,
                double level) {
  if (preds.empty()) {
    throw std::domain_error("coverage needs at least one prediction");
  }
  std::size_t hit = 0;
  for (const auto& [dist, gt] : preds) {
    if (std::abs(gt - dist.mu) <= interval_halfwidth(dist, level)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(preds.size());
}

double confidence_auroc(std::span<const double> scores,
                        std::span<const char> correct) {
  if (scores.size() != correct.size()) {
    throw std::invalid_argument("confidence_auroc: length mismatch");
  }
  std::size_t n_pos = 0;
  for (char c : correct) n_pos += (c != 0);
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    warn("confidence_auroc: single-class input; returning 0.5");
    return 0.5;
  }
  // Rank-sum form: AUROC = (R_pos - n_pos(n_pos+1)/2) / (n_pos * n_neg),
  // with average ranks so ties contribute half.
  std::vector<double> s(scores.begin(), scores.end());
  const auto ranks = average_ranks(s);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (correct[i] != 0) rank_sum += ranks[i];
  }
  const double n_pos_d = static_cast<double>(n_pos);
  return (rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0) /
         (n_pos_d * static_cast<double>(n_neg));
}

std::string report_to_json(const EvalReport& report,
                           const std::string& timestamp) {
  nlohmann::ordered_json j;
  j["depth_mae_m"] = report.depth_mae_m;
  j["spearman_sigma_vs_abserr"] = report.spearman_sigma_vs_abserr;
  j["interval_coverage_90"] = report.interval_coverage_90;
  j["confidence_auroc"] = report.confidence_auroc;
  j["n_objects"] = report.n_objects;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  return j.dump(2) + "\n";
}

}  // namespace gupkit
