#pragma once

namespace gupkit {

/// Pinhole camera reduced to the single intrinsic the height/depth
/// relation needs.
struct CameraModel {
  double focal_length_px;

  explicit CameraModel(double focal_length_px);
};

/// A noise-free object satisfies h2d_px == f * h3d_m / depth_m.
struct ObjectGeometry {
  double h3d_m;
  double depth_m;
  double h2d_px;
};

/// depth = f * h3d / h2d. Throws std::domain_error on non-positive
/// heights, naming the offending argument.
double infer_depth(const CameraModel& cam, double h3d_m, double h2d_px);

/// h2d = f * h3d / depth; exact algebraic inverse of infer_depth.
double project_height(const CameraModel& cam, double h3d_m, double depth_m);

/// Depth change caused by perturbing the 3D height by delta_h3d at a fixed
/// observed 2D height: f * delta_h3d / h2d. Linear in delta_h3d.
double depth_shift(const CameraModel& cam, double h2d_px, double delta_h3d_m);

/// f / h2d, the multiplicative gain turning a 3D-height error into a depth
/// error. Equals depth / h3d for a noise-free object.
double amplification_gain(const CameraModel& cam, double h2d_px);

}  // namespace gupkit
