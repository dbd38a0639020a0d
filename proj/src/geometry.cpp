#include "gupkit/geometry.hpp"

#include <stdexcept>
#include <string>

namespace gupkit {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) {
    throw std::domain_error(std::string(name) + " must be > 0, got " +
                            std::to_string(v));
  }
}

}  // namespace

CameraModel::CameraModel(double focal_length_px_in)
    : focal_length_px(focal_length_px_in) {
  require_positive(focal_length_px, "focal_length_px");
}

double infer_depth(const CameraModel& cam, double h3d_m, double h2d_px) {
  require_positive(h3d_m, "h3d_m");
  require_positive(h2d_px, "h2d_px");
  return cam.focal_length_px * h3d_m / h2d_px;
}

double project_height(const CameraModel& cam, double h3d_m, double depth_m) {
  require_positive(h3d_m, "h3d_m");
  require_positive(depth_m, "depth_m");
  return cam.focal_length_px * h3d_m / depth_m;
}

double depth_shift(const CameraModel& cam, double h2d_px, double delta_h3d_m) {
  // gain * delta rather than f*delta/h2d, so the gain identity is bitwise.
  return amplification_gain(cam, h2d_px) * delta_h3d_m;
}

double amplification_gain(const CameraModel& cam, double h2d_px) {
  require_positive(h2d_px, "h2d_px");
  return cam.focal_length_px / h2d_px;
}

}  // namespace gupkit
