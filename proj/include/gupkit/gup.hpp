#pragma once

#include "gupkit/geometry.hpp"
#include "gupkit/laplace.hpp"

namespace gupkit {

/// Inputs of the uncertainty projection: the predicted 3D-height
/// distribution, the observed 2D height it is projected through, and the
/// learned additive depth-bias distribution.
struct GupInputs {
  LaplaceDist h3d_dist;   // meters
  double h2d_px;          // pixels, > 0
  LaplaceDist bias_dist;  // meters
  CameraModel cam;
};

struct DepthPrediction {
  LaplaceDist depth_dist;      // projected + bias
  LaplaceDist projected_dist;  // pure projection of the height distribution
  double confidence;           // exp(-sigma_d), in (0,1)
};

/// Push the height distribution through the projection: the depth estimate
/// f*h3d/h2d is linear in h3d at fixed h2d, so the output is
/// (f*mu_h/h2d, f*sigma_h/h2d). The error-amplification gain f/h2d acts on
/// the spread exactly as it acts on a point estimate.
LaplaceDist project_distribution(const GupInputs& in);

/// Final depth distribution: independent sum of projection and bias.
LaplaceDist compose_depth(const LaplaceDist& projected,
                          const LaplaceDist& bias);

/// Uncertainty regression loss on the composed depth distribution.
double depth_loss(const LaplaceDist& final_dist, double depth_gt_m);

/// Gradient of depth_loss through the projection and composition, in the
/// coordinates the trainer optimizes: raw locations, log-sigmas, and the
/// 2D height.
struct DepthLossGrad {
  double d_mu_h;
  double d_log_sigma_h;
  double d_mu_b;
  double d_log_sigma_b;
  double d_h2d;
};

DepthLossGrad depth_loss_grad(const GupInputs& in, double depth_gt_m);

/// Full forward pass of the module: projection, composition, confidence.
DepthPrediction predict_depth(const GupInputs& in);

/// Map depth-distribution spread to a (0,1) confidence: exp(-sigma_d).
double uncertainty_confidence(double sigma_d);

/// Final detection score: product of the 2D score and the depth confidence.
double fuse_scores(double p2d, double p_depth);

}  // namespace gupkit
