#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "radcal/calibration.hpp"
#include "radcal/camera_features.hpp"
#include "radcal/error.hpp"
#include "radcal/radar_features.hpp"
#include "radcal/synth.hpp"

using namespace radcal;

TEST(SynthDefaults, GroundTruthAndIntrinsics) {
  const Extrinsics T = default_synthetic_extrinsics();
  EXPECT_TRUE(T.is_valid());
  EXPECT_TRUE(T.translation.isApprox(Vec3(0.1, 0.0, -0.05)));
  // radar forward ends up near camera forward, rotated by 10 degrees
  const Vec3 fwd = T.rotation * Vec3::UnitX();
  EXPECT_NEAR(std::acos(fwd.z()), 10.0 * std::numbers::pi / 180.0, 1e-12);
  const CameraIntrinsics K = default_synthetic_intrinsics();
  EXPECT_EQ(K.width, 1920);
  EXPECT_EQ(K.height, 1080);
  EXPECT_NEAR(2.0 * std::atan(960.0 / K.fx), 100.0 * std::numbers::pi / 180.0, 1e-12);
  EXPECT_NEAR(2.0 * std::atan(540.0 / K.fy), 60.0 * std::numbers::pi / 180.0, 1e-12);
}

TEST(CalibrationScene, NoiseFreeGeometry) {
  SceneConfig cfg;
  cfg.clutter_only_poses = 2;
  const CalibrationScene scene = gen_calibration_scene(cfg);
  ASSERT_EQ(scene.poses.size(), 24u);
  const double az_lim = (cfg.radar_fov_h_deg / 2.0) * std::numbers::pi / 180.0;
  const double el_lim = (cfg.radar_fov_v_deg / 2.0) * std::numbers::pi / 180.0;
  for (const CalibrationPose& p : scene.poses) {
    EXPECT_EQ(p.corners.corners.size(), 35u);
    EXPECT_TRUE(p.corners.within_image(1920, 1080));
    const SphericalReturn s = cart2sph(p.true_center);
    EXPECT_GE(s.range, cfg.min_range);
    EXPECT_LE(s.range, cfg.max_range);
    EXPECT_LT(std::abs(s.azimuth), az_lim);
    EXPECT_LT(std::abs(s.elevation), el_lim);
    EXPECT_LT(std::abs(p.camera_time - p.radar_time), kDefaultSyncTolerance);

    const ReflectorDetection d = extract_reflector(p.frame, {}, {});
    if (p.pose_id >= 22) {
      EXPECT_FALSE(p.has_reflector);
      EXPECT_FALSE(d.found());
      continue;
    }
    ASSERT_TRUE(d.found()) << "pose " << p.pose_id;
    EXPECT_LT((d.center - p.true_center).norm(), 1e-9);
    const Pixel c = checkerboard_center(p.corners);
    EXPECT_NEAR(c.u, p.true_image_center.u, 1e-6);
    EXPECT_NEAR(c.v, p.true_image_center.v, 1e-6);
    const auto proj = project(cfg.intrinsics, cfg.ground_truth, p.true_center);
    ASSERT_TRUE(proj);
    EXPECT_NEAR(proj->u, c.u, 1e-6);
  }
}

TEST(CalibrationScene, Deterministic) {
  SceneConfig cfg;
  cfg.pixel_sigma = 1.0;
  cfg.radar_position_sigma = 0.02;
  const CalibrationScene a = gen_calibration_scene(cfg);
  const CalibrationScene b = gen_calibration_scene(cfg);
  ASSERT_EQ(a.poses.size(), b.poses.size());
  for (std::size_t i = 0; i < a.poses.size(); ++i) {
    EXPECT_EQ(a.poses[i].camera_time, b.poses[i].camera_time);
    ASSERT_EQ(a.poses[i].frame.returns.size(), b.poses[i].frame.returns.size());
    for (std::size_t k = 0; k < a.poses[i].frame.returns.size(); ++k) {
      EXPECT_EQ(a.poses[i].frame.returns[k].range, b.poses[i].frame.returns[k].range);
    }
    EXPECT_EQ(a.poses[i].corners.corners.back().u, b.poses[i].corners.corners.back().u);
  }
  cfg.seed = 8;
  const CalibrationScene c = gen_calibration_scene(cfg);
  EXPECT_NE(a.poses[0].camera_time, c.poses[0].camera_time);
}

TEST(CalibrationScene, InfeasibleBoard) {
  SceneConfig cfg;
  cfg.square_size = 5.0;
  try {
    (void)gen_calibration_scene(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFovInfeasible);
  }
  cfg = SceneConfig{};
  cfg.radar_fov_v_deg = 4.0;
  EXPECT_THROW((void)gen_calibration_scene(cfg), Error);
}

TEST(CalibrationScene, RejectsBadConfig) {
  SceneConfig cfg;
  cfg.poses = 0;
  EXPECT_THROW((void)gen_calibration_scene(cfg), Error);
  cfg = SceneConfig{};
  cfg.pixel_sigma = -1.0;
  EXPECT_THROW((void)gen_calibration_scene(cfg), Error);
}

TEST(LabelScene, CleanSceneStructure) {
  LabelSceneConfig cfg;
  cfg.frames = 2;
  const CameraIntrinsics K = default_synthetic_intrinsics();
  const Extrinsics T = default_synthetic_extrinsics();
  const LabelScene scene = gen_label_scene(cfg, K, T);
  ASSERT_EQ(scene.frames.size(), 2u);
  EXPECT_DOUBLE_EQ(scene.frames[1].timestamp - scene.frames[0].timestamp, cfg.frame_period);
  for (const LabelFrame& f : scene.frames) {
    EXPECT_EQ(f.masks.size(), 5u);
    ASSERT_EQ(f.points.size(), f.ground_truth.size());
    ASSERT_EQ(f.points.size(), f.roles.size());
    int clutter = 0;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      EXPECT_EQ(f.roles[i] == PointRole::kObject, f.ground_truth[i].has_value());
      EXPECT_NE(f.roles[i], PointRole::kFalsePositiveBait);
      EXPECT_NE(f.roles[i], PointRole::kFalseNegativeBait);
      clutter += f.roles[i] == PointRole::kClutter;
      if (f.ground_truth[i]) {
        EXPECT_GE(f.ground_truth[i]->class_id, 1);
        EXPECT_LE(f.ground_truth[i]->class_id, cfg.classes);
      }
    }
    EXPECT_EQ(clutter, cfg.clutter_points);
  }
}

TEST(LabelScene, CorruptionAddsBait) {
  LabelSceneConfig cfg;
  cfg.fp_rate = 0.3;
  cfg.fn_rate = 0.3;
  const LabelScene scene = gen_label_scene(cfg, default_synthetic_intrinsics(), default_synthetic_extrinsics());
  int fp = 0, fn = 0;
  const LabelFrame& f = scene.frames[0];
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    if (f.roles[i] == PointRole::kFalsePositiveBait) {
      ++fp;
      EXPECT_FALSE(f.ground_truth[i]);
    }
    if (f.roles[i] == PointRole::kFalseNegativeBait) {
      ++fn;
      EXPECT_TRUE(f.ground_truth[i]);
    }
  }
  EXPECT_GT(fp, 0);
  EXPECT_GT(fn, 0);
  EXPECT_STREQ(to_string(PointRole::kFalsePositiveBait), "fp_bait");
}

TEST(LabelScene, Deterministic) {
  LabelSceneConfig cfg;
  cfg.fp_rate = 0.1;
  const auto K = default_synthetic_intrinsics();
  const auto T = default_synthetic_extrinsics();
  const LabelScene a = gen_label_scene(cfg, K, T);
  const LabelScene b = gen_label_scene(cfg, K, T);
  ASSERT_EQ(a.frames[0].points.size(), b.frames[0].points.size());
  for (std::size_t i = 0; i < a.frames[0].points.size(); ++i) {
    EXPECT_EQ(a.frames[0].points[i].position, b.frames[0].points[i].position);
    EXPECT_EQ(a.frames[0].ground_truth[i], b.frames[0].ground_truth[i]);
  }
}

TEST(CalibrationScene, ClutterOnlyPosesAreDropped) {
  SceneConfig cfg;
  cfg.clutter_only_poses = 2;
  const CalibrationScene scene = gen_calibration_scene(cfg);
  std::vector<CameraObservation> cams;
  std::vector<RadarObservation> radars;
  for (const CalibrationPose& p : scene.poses) {
    cams.push_back({p.pose_id, p.camera_time, checkerboard_center(p.corners)});
    const ReflectorDetection d = extract_reflector(p.frame, {}, {});
    if (d.found()) radars.push_back({p.pose_id, p.radar_time, d.center});
  }
  const CorrespondenceSet s = build_correspondences(cams, radars);
  EXPECT_EQ(s.size(), 22u);
  EXPECT_EQ(s.missing, (std::vector<int>{22, 23}));
  const CalibrationResult r = solve_extrinsics(s, cfg.intrinsics);
  EXPECT_LT(rotation_distance(r.extrinsics.rotation, cfg.ground_truth.rotation), 1e-6);
  EXPECT_LT(r.mre, 1e-6);
}
