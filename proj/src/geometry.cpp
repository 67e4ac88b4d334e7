#include "radcal/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <spdlog/spdlog.h>

#include "radcal/error.hpp"

namespace radcal {

namespace {

constexpr double kPi = std::numbers::pi;

// Fixes the sign ambiguity of a half-turn: r and -r are the same rotation.
Vec3 canonical_half_turn(Vec3 r) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(r[i]) > 1e-12) {
      if (r[i] < 0.0) r = -r;
      break;
    }
  }
  return r;
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
    throw Error(ErrorCode::kInvalidArgument, "focal lengths must be positive and finite");
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image size must be positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorCode::kInvalidArgument, "principal point must be finite");
  }
  if (!(cx > 0.0 && cx < width && cy > 0.0 && cy < height)) {
    spdlog::warn("principal point ({}, {}) lies outside the {}x{} image", cx, cy, width, height);
  }
}

Mat3 CameraIntrinsics::matrix() const {
  Mat3 k;
  k << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
  return k;
}

Extrinsics Extrinsics::from_matrix(const Mat4& homogeneous) {
  Extrinsics t;
  t.rotation = homogeneous.topLeftCorner<3, 3>();
  t.translation = homogeneous.topRightCorner<3, 1>();
  return t;
}

Mat4 Extrinsics::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Extrinsics Extrinsics::inverse() const {
  Extrinsics inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Extrinsics Extrinsics::compose(const Extrinsics& other) const {
  Extrinsics out;
  out.rotation = rotation * other.rotation;
  out.translation = rotation * other.translation + translation;
  return out;
}

bool Extrinsics::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho < tol && rotation.determinant() > 0.0;
}

AxisAngle AxisAngle::from_vector(const Vector6d& params) {
  AxisAngle a;
  a.rotation = params.head<3>();
  a.translation = params.tail<3>();
  return a;
}

Vector6d AxisAngle::to_vector() const {
  Vector6d v;
  v << rotation, translation;
  return v;
}

bool SphericalReturn::is_valid() const {
  return std::isfinite(range) && std::isfinite(azimuth) && std::isfinite(elevation) &&
         std::isfinite(radial_velocity) && std::isfinite(rcs) && range >= 0.0 && azimuth > -kPi &&
         azimuth <= kPi && elevation >= -kPi / 2 && elevation <= kPi / 2;
}

Vec3 sph2cart(const SphericalReturn& s) {
  const double horizontal = s.range * std::cos(s.elevation);
  return {horizontal * std::cos(s.azimuth), horizontal * std::sin(s.azimuth),
          s.range * std::sin(s.elevation)};
}

SphericalReturn cart2sph(const Vec3& p, double radial_velocity, double rcs) {
  SphericalReturn s;
  s.range = p.norm();
  s.azimuth = std::atan2(p.y(), p.x());
  if (s.azimuth <= -kPi) s.azimuth = kPi;
  s.elevation = s.range > 0.0 ? std::atan2(p.z(), std::hypot(p.x(), p.y())) : 0.0;
  s.radial_velocity = radial_velocity;
  s.rcs = rcs;
  return s;
}

Mat3 skew(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return m;
}

Mat3 axis_angle_to_rotation(const Vec3& rotation_vector) {
  const double theta2 = rotation_vector.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;  // sin(θ)/θ
  double b;  // (1 − cos θ)/θ²
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = skew(rotation_vector);
  return Mat3::Identity() + a * k + b * k * k;
}

Vec3 rotation_to_axis_angle(const Mat3& rotation) {
  const Vec3 vee{rotation(2, 1) - rotation(1, 2), rotation(0, 2) - rotation(2, 0),
                 rotation(1, 0) - rotation(0, 1)};
  const double sin_theta = 0.5 * vee.norm();
  const double cos_theta = 0.5 * (rotation.trace() - 1.0);
  const double theta = std::atan2(sin_theta, cos_theta);

  if (cos_theta > -0.5) {
    // vee = 2 sinθ n; θ/sinθ → 1 as θ → 0.
    const double scale = theta < 1e-6 ? 0.5 * (1.0 + theta * theta / 6.0) : 0.5 * theta / sin_theta;
    return scale * vee;
  }

  // Near π: (R + Rᵀ)/2 − cosθ I = (1 − cosθ) n nᵀ. Take the best-conditioned column.
  const Mat3 s = 0.5 * (rotation + rotation.transpose()) - cos_theta * Mat3::Identity();
  int k = 0;
  s.diagonal().maxCoeff(&k);
  Vec3 axis = s.col(k) / std::sqrt(std::max(s(k, k), 1e-300));
  axis.normalize();
  if (axis.dot(vee) < 0.0) axis = -axis;
  Vec3 r = theta * axis;
  if (std::abs(theta - kPi) < 1e-12) r = canonical_half_turn(r);
  return r;
}

Vec3 canonicalize_axis_angle(const Vec3& rotation_vector) {
  const double theta = rotation_vector.norm();
  if (theta <= kPi) {
    return theta == kPi ? canonical_half_turn(rotation_vector) : rotation_vector;
  }
  const Vec3 axis = rotation_vector / theta;
  double wrapped = std::fmod(theta, 2.0 * kPi);
  if (wrapped > kPi) wrapped -= 2.0 * kPi;
  Vec3 r = wrapped * axis;
  if (std::abs(std::abs(wrapped) - kPi) < 1e-15) r = canonical_half_turn(r);
  return r;
}

Extrinsics to_extrinsics(const AxisAngle& a) {
  Extrinsics t;
  t.rotation = axis_angle_to_rotation(a.rotation);
  t.translation = a.translation;
  return t;
}

AxisAngle to_axis_angle(const Extrinsics& T) {
  AxisAngle a;
  a.rotation = rotation_to_axis_angle(T.rotation);
  a.translation = T.translation;
  return a;
}

Mat3 orthonormalize(const Mat3& m) {
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

double rotation_distance(const Mat3& a, const Mat3& b) {
  return rotation_to_axis_angle(a.transpose() * b).norm();
}

Vec3 transform_point(const Extrinsics& T, const Vec3& p) { return T.rotation * p + T.translation; }

std::optional<Pixel> project_camera_point(const CameraIntrinsics& K, const Vec3& p_cam) {
  if (!(p_cam.z() > kMinProjectionDepth)) return std::nullopt;
  return Pixel{K.fx * p_cam.x() / p_cam.z() + K.cx, K.fy * p_cam.y() / p_cam.z() + K.cy};
}

std::optional<Pixel> project(const CameraIntrinsics& K, const Extrinsics& T, const Vec3& p) {
  return project_camera_point(K, transform_point(T, p));
}

}  // namespace radcal
