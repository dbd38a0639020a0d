#include "gupkit/eval.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gupkit/rng.hpp"
#include "oracles.hpp"

using namespace gupkit;

TEST_CASE("depth_mae") {
  std::vector<std::pair<double, double>> perfect = {{10.0, 10.0}, {20.0, 20.0}};
  CHECK(depth_mae(perfect) == 0.0);

  std::vector<std::pair<double, double>> residuals = {{11.0, 10.0}, {23.0, 20.0}};
  CHECK(depth_mae(residuals) == 2.0);

  std::vector<std::pair<double, double>> offset;
  for (int i = 0; i < 10; ++i) offset.emplace_back(i + 1.5, i);
  CHECK(depth_mae(offset) == doctest::Approx(1.5).epsilon(1e-12));

  CHECK_THROWS_AS(depth_mae({}), std::domain_error);
}

TEST_CASE("spearman hand examples") {
  std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> up = {10.0, 20.0, 30.0, 40.0};
  std::vector<double> down = {4.0, 3.0, 2.0, 1.0};
  CHECK(spearman(a, up) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spearman(a, down) == doctest::Approx(-1.0).epsilon(1e-12));

  std::vector<double> err = {1.0, 3.0, 2.0, 4.0};
  CHECK(spearman(a, err) == doctest::Approx(0.8).epsilon(1e-12));

  std::vector<double> flat = {5.0, 5.0, 5.0, 5.0};
  CHECK(spearman(a, flat) == 0.0);
  std::vector<double> shorter = {1.0, 2.0};
  CHECK(spearman(a, shorter) == 0.0);
}

TEST_CASE("spearman agrees with the no-ties textbook formula") {
  CounterRng rng(321);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(20), y(20);
    for (double& v : x) v = rng.uniform01();
    for (double& v : y) v = rng.uniform01();
    CHECK(spearman(x, y) ==
          doctest::Approx(oracles::spearman_no_ties(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("spearman is invariant under increasing transforms") {
  CounterRng rng(654);
  std::vector<double> x(50), y(50);
  for (double& v : x) v = rng.uniform(-3.0, 3.0);
  for (double& v : y) v = rng.uniform(-3.0, 3.0);
  const double base = spearman(x, y);
  std::vector<double> ex(x.size()), cubed_y(y.size());
  std::transform(x.begin(), x.end(), ex.begin(),
                 [](double v) { return std::exp(v); });
  std::transform(y.begin(), y.end(), cubed_y.begin(),
                 [](double v) { return v * v * v + 2.0 * v; });
  CHECK(spearman(ex, cubed_y) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("coverage") {
  std::vector<std::pair<LaplaceDist, double>> centered = {
      {LaplaceDist(10.0, 1.0), 10.0}, {LaplaceDist(-2.0, 0.5), -2.0}};
  CHECK(coverage(centered, 0.9) == 1.0);

  std::vector<std::pair<LaplaceDist, double>> narrow = {
      {LaplaceDist(10.0, 1e-300), 11.0}, {LaplaceDist(0.0, 1e-300), 0.5}};
  CHECK(coverage(narrow, 0.9) == 0.0);

  CHECK_THROWS_AS(coverage({}, 0.9), std::domain_error);
}

TEST_CASE("coverage is monotone in the level") {
  CounterRng rng(987);
  std::vector<std::pair<LaplaceDist, double>> preds;
  for (int i = 0; i < 400; ++i) {
    const LaplaceDist d(rng.uniform(-5.0, 5.0), rng.uniform(0.2, 3.0));
    preds.emplace_back(d, d.mu + rng.uniform(-6.0, 6.0));
  }
  double prev = 0.0;
  for (double level : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    const double c = coverage(preds, level);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("coverage self-consistency on sampled targets") {
  // Targets drawn from their own predicted distributions must land inside
  // the 90% interval about 90% of the time.
  CounterRng rng(13579);
  std::vector<std::pair<LaplaceDist, double>> preds;
  preds.reserve(1000000);
  for (int i = 0; i < 1000000; ++i) {
    const LaplaceDist d(rng.uniform(-10.0, 10.0), rng.uniform(0.1, 4.0));
    CounterRng draw(42, static_cast<std::uint64_t>(i));
    preds.emplace_back(d, sample(d, draw, 1)[0]);
  }
  CHECK(std::abs(coverage(preds, 0.9) - 0.9) < 0.003);
}

TEST_CASE("confidence_auroc hand examples") {
  std::vector<double> separating = {0.9, 0.8, 0.2, 0.1};
  std::vector<char> labels = {1, 1, 0, 0};
  CHECK(confidence_auroc(separating, labels) == 1.0);

  std::vector<double> equal = {0.5, 0.5, 0.5, 0.5};
  CHECK(confidence_auroc(equal, labels) == 0.5);

  std::vector<double> scores = {0.9, 0.8, 0.3, 0.1};
  std::vector<char> mixed = {1, 0, 1, 0};
  CHECK(confidence_auroc(scores, mixed) == doctest::Approx(0.75).epsilon(1e-12));

  std::vector<char> single = {1, 1, 1, 1};
  CHECK(confidence_auroc(scores, single) == 0.5);
}

TEST_CASE("confidence_auroc matches pair enumeration with ties") {
  CounterRng rng(1111);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> scores(50);
    std::vector<char> correct(50);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      // small discrete support so ties actually happen
      scores[i] = 0.1 * static_cast<double>(rng.next_u64() % 8);
      correct[i] = static_cast<char>(rng.next_u64() % 2);
      has_pos = has_pos || correct[i];
      has_neg = has_neg || !correct[i];
    }
    if (!has_pos || !has_neg) continue;
    CHECK(confidence_auroc(scores, correct) ==
          doctest::Approx(oracles::auroc_pairs(scores, correct)).epsilon(1e-12));
  }
}

TEST_CASE("confidence_auroc is invariant under increasing transforms") {
  CounterRng rng(2222);
  std::vector<double> scores(80);
  std::vector<char> correct(80);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform01();
    correct[i] = static_cast<char>(scores[i] + rng.uniform(-0.4, 0.4) > 0.5);
  }
  const double base = confidence_auroc(scores, correct);
  std::vector<double> squashed(scores.size());
  std::transform(scores.begin(), scores.end(), squashed.begin(),
                 [](double v) { return std::tanh(3.0 * v) - 5.0; });
  CHECK(confidence_auroc(squashed, correct) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("report JSON carries exactly the report fields") {
  EvalReport report{1.25, 0.62, 0.91, 0.83, 2000};
  const std::string with_ts = report_to_json(report, "2026-08-10T12:00:00Z");
  CHECK(with_ts.find("\"depth_mae_m\": 1.25") != std::string::npos);
  CHECK(with_ts.find("\"spearman_sigma_vs_abserr\": 0.62") != std::string::npos);
  CHECK(with_ts.find("\"interval_coverage_90\": 0.91") != std::string::npos);
  CHECK(with_ts.find("\"confidence_auroc\": 0.83") != std::string::npos);
  CHECK(with_ts.find("\"n_objects\": 2000") != std::string::npos);
  CHECK(with_ts.find("\"timestamp\": \"2026-08-10T12:00:00Z\"") !=
        std::string::npos);

  const std::string without_ts = report_to_json(report, "");
  CHECK(without_ts.find("timestamp") == std::string::npos);
}
