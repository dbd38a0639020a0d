#include "gupkit/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gupkit {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double sign_or_zero(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

LaplaceDist::LaplaceDist(double mu_in, double sigma_in)
    : mu(mu_in), sigma(sigma_in) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("LaplaceDist sigma must be > 0, got " +
                            std::to_string(sigma));
  }
}

LaplaceDist LaplaceDist::from_scale(double mu, double lambda) {
  return LaplaceDist(mu, kSqrt2 * lambda);
}

double LaplaceDist::scale() const { return sigma / kSqrt2; }

double pdf(const LaplaceDist& d, double x) {
  const double lambda = d.scale();
  return std::exp(-std::abs(x - d.mu) / lambda) / (2.0 * lambda);
}

double interval_halfwidth(const LaplaceDist& d, double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::domain_error("coverage must lie in (0,1), got " +
                            std::to_string(coverage));
  }
  return d.scale() * std::log(1.0 / (1.0 - coverage));
}

std::vector<double> sample(const LaplaceDist& d, CounterRng& rng,
                           std::size_t n) {
  const double lambda = d.scale();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_symmetric();
    out.push_back(d.mu -
                  lambda * sign_or_zero(u) * std::log(1.0 - 2.0 * std::abs(u)));
  }
  return out;
}

LaplaceDist affine(const LaplaceDist& d, double a, double b) {
  if (a == 0.0) {
    throw std::domain_error("affine scale a == 0 would collapse the distribution");
  }
  return LaplaceDist(a * d.mu + b, std::abs(a) * d.sigma);
}

LaplaceDist sum_independent(const LaplaceDist& p, const LaplaceDist& b) {
  return LaplaceDist(p.mu + b.mu,
                     std::sqrt(p.sigma * p.sigma + b.sigma * b.sigma));
}

double laplace_nll(double mu, double sigma, double target) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("laplace_nll sigma must be > 0, got " +
                            std::to_string(sigma));
  }
  return kSqrt2 / sigma * std::abs(mu - target) + std::log(sigma);
}

LaplaceNllGrad laplace_nll_grad(double mu, double sigma, double target) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("laplace_nll_grad sigma must be > 0, got " +
                            std::to_string(sigma));
  }
  const double residual = mu - target;
  return LaplaceNllGrad{
      kSqrt2 / sigma * sign_or_zero(residual),
      -kSqrt2 / (sigma * sigma) * std::abs(residual) + 1.0 / sigma,
  };
}

}  // namespace gupkit
