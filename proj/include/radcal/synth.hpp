#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "radcal/autolabel.hpp"
#include "radcal/camera_features.hpp"
#include "radcal/geometry.hpp"
#include "radcal/labels.hpp"
#include "radcal/radar_features.hpp"

namespace radcal {

/// 1920×1080 camera with a 100°×60° field of view, principal point at the centre.
[[nodiscard]] CameraIntrinsics default_synthetic_intrinsics();

/// Rotation that maps radar axes (x fwd, y left, z up) onto camera axes (x right, y down, z fwd).
[[nodiscard]] Mat3 radar_to_camera_axes();

/// 10° about the camera y axis on top of the axis swap; t = (0.1, 0, −0.05) m.
[[nodiscard]] Extrinsics default_synthetic_extrinsics();

struct SceneConfig {
  Extrinsics ground_truth{default_synthetic_extrinsics()};
  CameraIntrinsics intrinsics{default_synthetic_intrinsics()};
  double radar_fov_h_deg{110.0};
  double radar_fov_v_deg{45.0};
  int poses{24};
  CheckerboardSpec board{8, 6};
  double square_size{0.08};  // m
  double min_range{3.5};     // m, board placement
  double max_range{14.5};
  double max_board_tilt_deg{0.0};  // 0 keeps the board parallel to the image plane
  double apex_offset{0.0};         // m, board face in front of the reflector apex
  double pixel_sigma{0.0};         // px, per corner
  double radar_position_sigma{0.0};  // m, isotropic, on the whole reflector blob
  double radar_range_sigma{0.0};     // m, per return
  double radar_angle_sigma{0.0};     // rad, per return
  double rcs_sigma{0.0};             // dBsm, per return
  int clutter_points{50};            // static, below the RCS gate
  int moving_clutter{10};            // strong but moving
  int far_clutter{5};                // strong, static, beyond the working range
  int clutter_only_poses{0};         // trailing poses with no reflector in the radar frame
  double timestamp_jitter{0.005};    // s
  std::uint64_t seed{7};

  void validate() const;
};

struct CalibrationPose {
  int pose_id{0};
  double camera_time{0.0};
  double radar_time{0.0};
  CornerSet corners;
  RadarFrame frame;
  bool has_reflector{true};
  Vec3 true_center{Vec3::Zero()};  // radar frame, noise free
  Pixel true_image_center;         // projection of true_center
};

struct CalibrationScene {
  SceneConfig config;
  std::vector<CalibrationPose> poses;
};

/// Throws FovInfeasible when a pose cannot be placed in both fields of view.
[[nodiscard]] CalibrationScene gen_calibration_scene(const SceneConfig& cfg);

struct LabelSceneConfig {
  int objects{5};
  int frames{1};
  int classes{3};
  int min_points_per_object{8};
  int max_points_per_object{20};
  int clutter_points{60};
  double min_range{6.0};  // m
  double max_range{40.0};
  double fp_rate{0.0};  // wrong-depth bait inside masks, per object point
  double fn_rate{0.0};  // near-centroid object points with a mask hole, per object point
  int mask_margin_px{3};
  double frame_period{1.0 / 15.0};  // s
  std::uint64_t seed{1};

  void validate() const;
};

enum class PointRole { kObject, kClutter, kFalsePositiveBait, kFalseNegativeBait };

[[nodiscard]] const char* to_string(PointRole r) noexcept;

struct LabelFrame {
  double timestamp{0.0};
  std::vector<RadarPoint> points;
  std::vector<InstanceMask> masks;
  std::vector<std::optional<InstanceLabel>> ground_truth;
  std::vector<PointRole> roles;
};

struct LabelScene {
  LabelSceneConfig config;
  CameraIntrinsics intrinsics;
  Extrinsics extrinsics;
  std::vector<LabelFrame> frames;
};

/// Objects with coherent position/velocity/RCS, rectangular masks, clutter
/// outside the masks and away from objects, plus optional corruption.
/// Throws FovInfeasible when objects cannot be placed without overlap.
[[nodiscard]] LabelScene gen_label_scene(const LabelSceneConfig& cfg, const CameraIntrinsics& K,
                                         const Extrinsics& T, const LabelParams& label_params = {});

}  // namespace radcal
