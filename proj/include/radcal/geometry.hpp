#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <optional>

namespace radcal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Continuous image coordinate; sub-pixel values are meaningful.
struct Pixel {
  double u{0.0};
  double v{0.0};
};

/// Distortion-free pinhole intrinsics.
struct CameraIntrinsics {
  double fx{0.0};
  double fy{0.0};
  double cx{0.0};
  double cy{0.0};
  int width{0};
  int height{0};

  /// Throws InvalidArgument on non-positive focal lengths or image size.
  /// A principal point outside the image is only logged.
  void validate() const;
  [[nodiscard]] Mat3 matrix() const;
};

/// Rigid radar-to-camera transform, p_cam = R * p_radar + t.
struct Extrinsics {
  Mat3 rotation{Mat3::Identity()};
  Vec3 translation{Vec3::Zero()};

  [[nodiscard]] static Extrinsics from_matrix(const Mat4& homogeneous);
  [[nodiscard]] Mat4 matrix() const;
  [[nodiscard]] Extrinsics inverse() const;
  /// (this ∘ other)(p) = this(other(p))
  [[nodiscard]] Extrinsics compose(const Extrinsics& other) const;
  /// Orthonormal with det +1 within `tol` (infinity norm of RᵀR − I), finite translation.
  [[nodiscard]] bool is_valid(double tol = 1e-9) const;
};

/// Six-parameter form optimized by the solver: rotation vector (rad) and translation (m).
struct AxisAngle {
  Vec3 rotation{Vec3::Zero()};
  Vec3 translation{Vec3::Zero()};

  [[nodiscard]] static AxisAngle from_vector(const Vector6d& params);
  [[nodiscard]] Vector6d to_vector() const;
};

/// Raw 4D radar return in sensor-native spherical coordinates.
struct SphericalReturn {
  double range{0.0};            // m
  double azimuth{0.0};          // rad, from +x toward +y
  double elevation{0.0};        // rad, from the xy-plane toward +z
  double radial_velocity{0.0};  // m/s
  double rcs{0.0};              // dBsm

  [[nodiscard]] bool is_valid() const;
};

// Radar frame: x forward, y left, z up.
[[nodiscard]] Vec3 sph2cart(const SphericalReturn& s);
[[nodiscard]] SphericalReturn cart2sph(const Vec3& p, double radial_velocity = 0.0, double rcs = 0.0);

[[nodiscard]] Mat3 skew(const Vec3& w);

/// Rodrigues formula; series expansion near zero.
[[nodiscard]] Mat3 axis_angle_to_rotation(const Vec3& rotation_vector);

/// Inverse of axis_angle_to_rotation, returning the canonical vector with
/// norm in [0, π]. At exactly π the sign is fixed so the first non-zero
/// component is positive.
[[nodiscard]] Vec3 rotation_to_axis_angle(const Mat3& rotation);

/// Wraps a rotation vector to the equivalent one with norm in [0, π].
[[nodiscard]] Vec3 canonicalize_axis_angle(const Vec3& rotation_vector);

[[nodiscard]] Extrinsics to_extrinsics(const AxisAngle& a);
[[nodiscard]] AxisAngle to_axis_angle(const Extrinsics& T);

/// Nearest rotation in the Frobenius sense (SVD projection onto SO(3)).
[[nodiscard]] Mat3 orthonormalize(const Mat3& m);

/// Geodesic angle between two rotations, radians.
[[nodiscard]] double rotation_distance(const Mat3& a, const Mat3& b);

[[nodiscard]] Vec3 transform_point(const Extrinsics& T, const Vec3& p);

/// Depth guard for projection (m).
inline constexpr double kMinProjectionDepth = 1e-6;

/// Pinhole projection of a point already in camera coordinates.
/// Empty when the point is behind (or on) the camera plane.
[[nodiscard]] std::optional<Pixel> project_camera_point(const CameraIntrinsics& K, const Vec3& p_cam);

/// Projects a radar-frame point. Empty when Z_cam <= kMinProjectionDepth.
[[nodiscard]] std::optional<Pixel> project(const CameraIntrinsics& K, const Extrinsics& T, const Vec3& p);

}  // namespace radcal
