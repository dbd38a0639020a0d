#include "gupkit/gup.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gupkit {

LaplaceDist project_distribution(const GupInputs& in) {
  if (!(in.h2d_px > 0.0)) {
    throw std::domain_error("h2d_px must be > 0, got " +
                            std::to_string(in.h2d_px));
  }
  return affine(in.h3d_dist, in.cam.focal_length_px / in.h2d_px, 0.0);
}

LaplaceDist compose_depth(const LaplaceDist& projected,
                          const LaplaceDist& bias) {
  return sum_independent(projected, bias);
}

double depth_loss(const LaplaceDist& final_dist, double depth_gt_m) {
  return laplace_nll(final_dist.mu, final_dist.sigma, depth_gt_m);
}

DepthLossGrad depth_loss_grad(const GupInputs& in, double depth_gt_m) {
  const double f = in.cam.focal_length_px;
  const double h2d = in.h2d_px;
  const LaplaceDist projected = project_distribution(in);
  const LaplaceDist final_dist = compose_depth(projected, in.bias_dist);

  const LaplaceNllGrad outer =
      laplace_nll_grad(final_dist.mu, final_dist.sigma, depth_gt_m);

  // mu_d = f*mu_h/h2d + mu_b
  // sigma_d = sqrt(sigma_p^2 + sigma_b^2) with sigma_p = f*sigma_h/h2d
  const double sigma_p = projected.sigma;
  const double sigma_b = in.bias_dist.sigma;
  const double sigma_d = final_dist.sigma;
  const double d_sigma_d_d_sigma_p = sigma_p / sigma_d;
  const double d_sigma_d_d_sigma_b = sigma_b / sigma_d;

  DepthLossGrad g{};
  g.d_mu_h = outer.d_mu * (f / h2d);
  g.d_mu_b = outer.d_mu;
  // d sigma_p / d log sigma_h = sigma_p; d sigma_b / d log sigma_b = sigma_b.
  g.d_log_sigma_h = outer.d_sigma * d_sigma_d_d_sigma_p * sigma_p;
  g.d_log_sigma_b = outer.d_sigma * d_sigma_d_d_sigma_b * sigma_b;
  g.d_h2d = outer.d_mu * (-f * in.h3d_dist.mu / (h2d * h2d)) +
            outer.d_sigma * d_sigma_d_d_sigma_p *
                (-f * in.h3d_dist.sigma / (h2d * h2d));
  return g;
}

DepthPrediction predict_depth(const GupInputs& in) {
  const LaplaceDist projected = project_distribution(in);
  const LaplaceDist final_dist = compose_depth(projected, in.bias_dist);
  return DepthPrediction{final_dist, projected,
                         uncertainty_confidence(final_dist.sigma)};
}

double uncertainty_confidence(double sigma_d) {
  if (!(sigma_d > 0.0)) {
    throw std::domain_error("sigma_d must be > 0, got " +
                            std::to_string(sigma_d));
  }
  return std::exp(-sigma_d);
}

double fuse_scores(double p2d, double p_depth) {
  if (!(p2d >= 0.0 && p2d <= 1.0)) {
    throw std::domain_error("p2d must lie in [0,1], got " +
                            std::to_string(p2d));
  }
  // [0,1] rather than the mathematical (0,1): exp(-sigma) underflows to 0
  // for extreme spreads and rounds to 1 for tiny ones; both limits are
  // legitimate scores.
  if (!(p_depth >= 0.0 && p_depth <= 1.0)) {
    throw std::domain_error("p_depth must lie in [0,1], got " +
                            std::to_string(p_depth));
  }
  return p2d * p_depth;
}

}  // namespace gupkit
