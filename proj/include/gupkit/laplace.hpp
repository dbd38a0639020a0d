#pragma once

#include <cstddef>
#include <vector>

#include "gupkit/rng.hpp"

namespace gupkit {

/// Laplace distribution parameterized by location and *standard deviation*.
/// The canonical field is sigma; the classic scale parameter lambda obeys
/// sigma = sqrt(2) * lambda and is derived on demand, so call sites never
/// juggle the sqrt(2) factor.
struct LaplaceDist {
  double mu;
  double sigma;

  LaplaceDist(double mu, double sigma);

  /// Construct from the classic scale parameter; stores sigma = sqrt(2)*lambda.
  static LaplaceDist from_scale(double mu, double lambda);

  double scale() const;  // lambda = sigma / sqrt(2)
};

/// Density (1 / 2*lambda) * exp(-|x - mu| / lambda).
double pdf(const LaplaceDist& d, double x);

/// Half-width q with P(|X - mu| <= q) == coverage; coverage in (0,1).
double interval_halfwidth(const LaplaceDist& d, double coverage);

/// n i.i.d. draws by inverse CDF: mu - lambda * sign(u) * ln(1 - 2|u|) with
/// u uniform on (-0.5, 0.5). Deterministic given the generator state.
std::vector<double> sample(const LaplaceDist& d, CounterRng& rng,
                           std::size_t n);

/// Distribution of a*X + b: location a*mu + b, sigma |a|*sigma. Throws on
/// a == 0 (a point mass is not representable).
LaplaceDist affine(const LaplaceDist& d, double a, double b);

/// Sum of independent variables: mean adds, variance adds. The Laplace
/// shape of the result is an approximation; mean and sigma are exact.
LaplaceDist sum_independent(const LaplaceDist& p, const LaplaceDist& b);

/// Uncertainty regression loss (sqrt(2)/sigma)*|mu - target| + ln(sigma).
double laplace_nll(double mu, double sigma, double target);

struct LaplaceNllGrad {
  double d_mu;
  double d_sigma;
};

/// Analytic gradient of laplace_nll; sign(0) is taken as 0 so the
/// zero-residual gradient is exactly (0, 1/sigma).
LaplaceNllGrad laplace_nll_grad(double mu, double sigma, double target);

}  // namespace gupkit
