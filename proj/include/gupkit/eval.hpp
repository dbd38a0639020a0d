#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gupkit/laplace.hpp"

namespace gupkit {

struct EvalReport {
  double depth_mae_m;
  double spearman_sigma_vs_abserr;
  double interval_coverage_90;
  double confidence_auroc;
  std::int64_t n_objects;
};

/// Mean |mu_d - d_gt| over (prediction, truth) pairs; empty input is a
/// domain error.
double depth_mae(std::span<const std::pair<double, double>> preds);

/// Spearman rank correlation with average-rank tie handling. Length
/// mismatch or a degenerate (all-equal) argument yields 0 with a warning
/// rather than an exception.
double spearman(std::span<const double> sigma, std::span<const double> abserr);

/// Fraction of truths inside the central `level` interval of their
/// predicted distribution.
double coverage(std::span<const std::pair<LaplaceDist, double>> preds,
                double level);

/// Probability that a random correct prediction outranks a random
/// incorrect one (rank-sum estimator, ties split evenly). Single-class
/// input yields 0.5 with a warning.
double confidence_auroc(std::span<const double> scores,
                        std::span<const char> correct);

/// Flat JSON with exactly the EvalReport field names; a timestamp entry is
/// appended unless it is passed empty.
std::string report_to_json(const EvalReport& report,
                           const std::string& timestamp);

}  // namespace gupkit
