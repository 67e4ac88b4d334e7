#include "radcal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "radcal/error.hpp"
#include "radcal/rng.hpp"

namespace radcal {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr int kMaxPlacementTries = 2000;
constexpr int kImageMarginPx = 20;

Mat3 rot_x(double a) {
  Mat3 r;
  r << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return r;
}

Mat3 rot_y(double a) {
  Mat3 r;
  r << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return r;
}

bool inside_image(const std::optional<Pixel>& px, const CameraIntrinsics& K, double margin) {
  return px && px->u >= margin && px->u <= K.width - margin && px->v >= margin && px->v <= K.height - margin;
}

SphericalReturn noisy_return(Rng& rng, const Vec3& p, double v, double rcs, const SceneConfig& cfg) {
  SphericalReturn s = cart2sph(p, v, rcs);
  s.range += rng.normal(0.0, cfg.radar_range_sigma);
  s.azimuth += rng.normal(0.0, cfg.radar_angle_sigma);
  s.elevation += rng.normal(0.0, cfg.radar_angle_sigma);
  s.rcs += rng.normal(0.0, cfg.rcs_sigma);
  return s;
}

Vec3 random_direction(Rng& rng) {
  Vec3 d;
  do {
    d = Vec3(rng.normal(), rng.normal(), rng.normal());
  } while (d.norm() < 1e-9);
  return d.normalized();
}

// Evenly spaced values centred on `mean`, half-width `spread`, in random order.
std::vector<double> spread_values(Rng& rng, double mean, double spread, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = mean + spread * ((2.0 * k + 1.0) / n - 1.0);
  rng.shuffle(v);
  return v;
}

struct PixelRect {
  int col0, row0, col1, row1;  // inclusive, zero-based

  [[nodiscard]] bool contains(int c, int r) const { return c >= col0 && c <= col1 && r >= row0 && r <= row1; }
  [[nodiscard]] bool overlaps(const PixelRect& o, int gap) const {
    return !(col1 + gap < o.col0 || o.col1 + gap < col0 || row1 + gap < o.row0 || o.row1 + gap < row0);
  }
};

std::pair<int, int> pixel_index(const Pixel& px) {
  return {static_cast<int>(std::lround(px.u)) - 1, static_cast<int>(std::lround(px.v)) - 1};
}

struct SynthObject {
  InstanceLabel label;
  double confidence{1.0};
  std::vector<RadarPoint> points;
  Vec3 centroid{Vec3::Zero()};
  double mean_velocity{0.0};
  double velocity_spread{0.0};
  double mean_rcs{0.0};
  double rcs_spread{0.0};
  PixelRect rect{};
  std::vector<RadarPoint> fp_bait;
  std::vector<RadarPoint> fn_bait;
  std::vector<std::pair<int, int>> holes;  // centre pixels of carved holes
};

constexpr int kHoleRadius = 2;

bool in_hole(const std::vector<std::pair<int, int>>& holes, int c, int r) {
  return std::any_of(holes.begin(), holes.end(), [&](const auto& h) {
    return std::abs(c - h.first) <= kHoleRadius && std::abs(r - h.second) <= kHoleRadius;
  });
}

}  // namespace

CameraIntrinsics default_synthetic_intrinsics() {
  CameraIntrinsics K;
  K.width = 1920;
  K.height = 1080;
  K.fx = (K.width / 2.0) / std::tan(50.0 * kDeg);
  K.fy = (K.height / 2.0) / std::tan(30.0 * kDeg);
  K.cx = K.width / 2.0;
  K.cy = K.height / 2.0;
  return K;
}

Mat3 radar_to_camera_axes() {
  Mat3 r;
  r << 0, -1, 0, 0, 0, -1, 1, 0, 0;
  return r;
}

Extrinsics default_synthetic_extrinsics() {
  Extrinsics T;
  T.rotation = rot_y(10.0 * kDeg) * radar_to_camera_axes();
  T.translation = Vec3(0.1, 0.0, -0.05);
  return T;
}

void SceneConfig::validate() const {
  intrinsics.validate();
  board.validate();
  if (!ground_truth.is_valid(1e-9)) throw Error(ErrorCode::kConfig, "ground-truth extrinsics are not a rigid transform");
  if (poses < 1) throw Error(ErrorCode::kConfig, "poses must be at least 1");
  if (clutter_only_poses < 0 || clutter_only_poses > poses) {
    throw Error(ErrorCode::kConfig, "clutter_only_poses must lie in [0, poses]");
  }
  if (!(square_size > 0.0) || !(min_range > 0.0) || !(max_range > min_range)) {
    throw Error(ErrorCode::kConfig, "board size and range interval must be positive");
  }
  if (!(radar_fov_h_deg > 0.0) || !(radar_fov_v_deg > 0.0)) throw Error(ErrorCode::kConfig, "radar FOV must be positive");
  if (pixel_sigma < 0.0 || radar_position_sigma < 0.0 || radar_range_sigma < 0.0 || radar_angle_sigma < 0.0 ||
      rcs_sigma < 0.0 || timestamp_jitter < 0.0 || max_board_tilt_deg < 0.0 || apex_offset < 0.0) {
    throw Error(ErrorCode::kConfig, "noise levels must be non-negative");
  }
  if (clutter_points < 0 || moving_clutter < 0 || far_clutter < 0) {
    throw Error(ErrorCode::kConfig, "clutter counts must be non-negative");
  }
}

CalibrationScene gen_calibration_scene(const SceneConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const CameraIntrinsics& K = cfg.intrinsics;
  const Extrinsics& T = cfg.ground_truth;
  const double az_lim = (cfg.radar_fov_h_deg / 2.0 - 5.0) * kDeg;
  const double el_lim = (cfg.radar_fov_v_deg / 2.0 - 3.0) * kDeg;
  if (az_lim <= 0.0 || el_lim <= 0.0) throw Error(ErrorCode::kFovInfeasible, "radar FOV too narrow for placement");

  const int nx = cfg.board.squares_x - 1;
  const int ny = cfg.board.squares_y - 1;

  CalibrationScene scene;
  scene.config = cfg;
  for (int k = 0; k < cfg.poses; ++k) {
    CalibrationPose pose;
    pose.pose_id = k;
    pose.has_reflector = k < cfg.poses - cfg.clutter_only_poses;

    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
      SphericalReturn s;
      s.range = rng.uniform(cfg.min_range, cfg.max_range);
      s.azimuth = rng.uniform(-az_lim, az_lim);
      s.elevation = rng.uniform(-el_lim, el_lim);
      const Vec3 center = sph2cart(s);
      const Vec3 c_cam = transform_point(T, center);
      if (c_cam.z() < 0.5) continue;

      const double psi = rng.uniform(-15.0, 15.0) * kDeg;
      Mat3 board_rot = Mat3::Identity();
      if (cfg.max_board_tilt_deg > 0.0) {
        board_rot = rot_x(rng.uniform(-cfg.max_board_tilt_deg, cfg.max_board_tilt_deg) * kDeg) *
                    rot_y(rng.uniform(-cfg.max_board_tilt_deg, cfg.max_board_tilt_deg) * kDeg);
      }
      const Vec3 ex = board_rot * Vec3(std::cos(psi), std::sin(psi), 0.0);
      const Vec3 ey = board_rot * Vec3(-std::sin(psi), std::cos(psi), 0.0);
      const Vec3 normal = board_rot * Vec3::UnitZ();
      const Vec3 board_center = c_cam - cfg.apex_offset * normal;

      std::vector<Pixel> corners;
      corners.reserve(static_cast<std::size_t>(nx * ny));
      bool ok = true;
      for (int j = 0; j < ny && ok; ++j) {
        for (int i = 0; i < nx && ok; ++i) {
          const Vec3 p = board_center + (i - (nx - 1) / 2.0) * cfg.square_size * ex +
                         (j - (ny - 1) / 2.0) * cfg.square_size * ey;
          const auto px = project_camera_point(K, p);
          ok = inside_image(px, K, kImageMarginPx);
          if (ok) corners.push_back(*px);
        }
      }
      if (!ok) continue;
      const auto center_px = project(K, T, center);
      if (!inside_image(center_px, K, kImageMarginPx)) continue;

      for (Pixel& c : corners) {
        c.u += rng.normal(0.0, cfg.pixel_sigma);
        c.v += rng.normal(0.0, cfg.pixel_sigma);
      }
      pose.corners = CornerSet{std::move(corners), cfg.board};
      pose.true_center = center;
      pose.true_image_center = *center_px;
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorCode::kFovInfeasible,
                  "could not place pose " + std::to_string(k) + " inside both fields of view");
    }

    pose.camera_time = 2.0 * k + rng.uniform(-cfg.timestamp_jitter, cfg.timestamp_jitter);
    pose.radar_time = 2.0 * k + rng.uniform(-cfg.timestamp_jitter, cfg.timestamp_jitter);
    pose.frame.timestamp = pose.radar_time;

    std::vector<SphericalReturn>& returns = pose.frame.returns;
    if (pose.has_reflector) {
      const Vec3 offset(rng.normal(0.0, cfg.radar_position_sigma), rng.normal(0.0, cfg.radar_position_sigma),
                        rng.normal(0.0, cfg.radar_position_sigma));
      const Vec3 apex = pose.true_center + offset;
      const SphericalReturn apex_return = noisy_return(rng, apex, rng.normal(0.0, 0.02), 40.0, cfg);
      returns.push_back(apex_return);
      const int blob = rng.uniform_int(4, 8);
      for (int b = 0; b < blob; ++b) {
        const Vec3 p = apex + Vec3(rng.normal(0.0, 0.03), rng.normal(0.0, 0.03), rng.normal(0.0, 0.03));
        SphericalReturn r = noisy_return(rng, p, std::clamp(rng.normal(0.0, 0.02), -0.2, 0.2),
                                         rng.uniform(30.0, 37.0), cfg);
        r.rcs = std::min(r.rcs, apex_return.rcs - 0.5);
        returns.push_back(r);
      }
    }
    for (int c = 0; c < cfg.clutter_points; ++c) {
      SphericalReturn r;
      r.range = rng.uniform(1.0, 40.0);
      r.azimuth = rng.uniform(-az_lim, az_lim);
      r.elevation = rng.uniform(-el_lim, el_lim);
      r.radial_velocity = rng.normal(0.0, 0.1);
      r.rcs = rng.uniform(-10.0, 9.5);
      returns.push_back(r);
    }
    for (int c = 0; c < cfg.moving_clutter; ++c) {
      SphericalReturn r;
      r.range = rng.uniform(cfg.min_range, cfg.max_range);
      r.azimuth = rng.uniform(-az_lim, az_lim);
      r.elevation = rng.uniform(-el_lim, el_lim);
      r.radial_velocity = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.8, 10.0);
      r.rcs = rng.uniform(12.0, 45.0);
      returns.push_back(r);
    }
    for (int c = 0; c < cfg.far_clutter; ++c) {
      SphericalReturn r;
      r.range = rng.uniform(16.0, 60.0);
      r.azimuth = rng.uniform(-az_lim, az_lim);
      r.elevation = rng.uniform(-el_lim, el_lim);
      r.radial_velocity = std::clamp(rng.normal(0.0, 0.05), -0.4, 0.4);
      r.rcs = rng.uniform(12.0, 45.0);
      returns.push_back(r);
    }
    rng.shuffle(returns);
    scene.poses.push_back(std::move(pose));
  }
  return scene;
}

void LabelSceneConfig::validate() const {
  if (objects < 0 || frames < 1 || classes < 1) throw Error(ErrorCode::kConfig, "objects/frames/classes out of range");
  if (min_points_per_object < 3 || max_points_per_object < min_points_per_object) {
    throw Error(ErrorCode::kConfig, "points per object must satisfy 3 <= min <= max");
  }
  if (clutter_points < 0 || mask_margin_px < 0) throw Error(ErrorCode::kConfig, "negative clutter count or margin");
  if (!(min_range > 0.0) || !(max_range > min_range)) throw Error(ErrorCode::kConfig, "invalid range interval");
  if (fp_rate < 0.0 || fp_rate > 1.0 || fn_rate < 0.0 || fn_rate > 1.0) {
    throw Error(ErrorCode::kConfig, "corruption rates must lie in [0, 1]");
  }
  if (!(frame_period > 0.0)) throw Error(ErrorCode::kConfig, "frame period must be positive");
}

const char* to_string(PointRole r) noexcept {
  switch (r) {
    case PointRole::kObject: return "object";
    case PointRole::kClutter: return "clutter";
    case PointRole::kFalsePositiveBait: return "fp_bait";
    case PointRole::kFalseNegativeBait: return "fn_bait";
  }
  return "object";
}

LabelScene gen_label_scene(const LabelSceneConfig& cfg, const CameraIntrinsics& K, const Extrinsics& T,
                           const LabelParams& lp) {
  cfg.validate();
  K.validate();
  lp.validate();
  Rng rng(cfg.seed);
  const Extrinsics T_inv = T.inverse();
  const double edge = cfg.mask_margin_px + 3.0;
  const double separation = 2.0 * lp.search_radius + 1.0;
  const double clutter_clearance = lp.search_radius + 0.5;
  const double max_depth_extent = std::min(1.3, lp.depth_tolerance - 0.2);

  LabelScene scene;
  scene.config = cfg;
  scene.intrinsics = K;
  scene.extrinsics = T;

  for (int f = 0; f < cfg.frames; ++f) {
    std::vector<SynthObject> objects;
    for (int o = 0; o < cfg.objects; ++o) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
        const double r = rng.uniform(cfg.min_range, cfg.max_range);
        const double az = rng.uniform(-30.0, 30.0) * kDeg;
        const Vec3 c(r * std::cos(az), r * std::sin(az), rng.uniform(-0.5, 1.0));
        const Vec3 half(rng.uniform(0.3, 0.6), rng.uniform(0.3, 1.0), rng.uniform(0.4, 0.9));
        const int n = rng.uniform_int(cfg.min_points_per_object, cfg.max_points_per_object);

        SynthObject obj;
        obj.label = {rng.uniform_int(1, cfg.classes), o + 1};
        obj.confidence = rng.uniform(0.5, 1.0);
        obj.mean_rcs = rng.uniform(5.0, 25.0);
        obj.rcs_spread = rng.uniform(1.0, 4.0);
        if (rng.uniform() < 0.5) {
          obj.mean_velocity = 0.0;
          obj.velocity_spread = 0.1;
        } else {
          obj.mean_velocity = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(2.0, 8.0);
          obj.velocity_spread = 0.15;
        }
        const std::vector<double> rcs = spread_values(rng, obj.mean_rcs, obj.rcs_spread, n);
        const std::vector<double> vel = spread_values(rng, obj.mean_velocity, obj.velocity_spread, n);

        double zmin = 1e300, zmax = -1e300;
        int cmin = K.width, cmax = -1, rmin = K.height, rmax = -1;
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
          RadarPoint p;
          p.position = c + Vec3(rng.uniform(-half.x(), half.x()), rng.uniform(-half.y(), half.y()),
                                rng.uniform(-half.z(), half.z()));
          p.rcs = rcs[static_cast<std::size_t>(k)];
          p.radial_velocity = vel[static_cast<std::size_t>(k)];
          const Vec3 q = transform_point(T, p.position);
          const auto px = project_camera_point(K, q);
          ok = inside_image(px, K, edge);
          if (!ok) break;
          zmin = std::min(zmin, q.z());
          zmax = std::max(zmax, q.z());
          const auto [col, row] = pixel_index(*px);
          cmin = std::min(cmin, col);
          cmax = std::max(cmax, col);
          rmin = std::min(rmin, row);
          rmax = std::max(rmax, row);
          obj.centroid += p.position;
          obj.points.push_back(p);
        }
        if (!ok || zmax - zmin >= max_depth_extent) continue;
        obj.centroid /= static_cast<double>(n);
        obj.rect = {std::max(0, cmin - cfg.mask_margin_px), std::max(0, rmin - cfg.mask_margin_px),
                    std::min(K.width - 1, cmax + cfg.mask_margin_px), std::min(K.height - 1, rmax + cfg.mask_margin_px)};
        const bool clash = std::any_of(objects.begin(), objects.end(), [&](const SynthObject& other) {
          return other.rect.overlaps(obj.rect, 2) || (other.centroid - obj.centroid).norm() <= separation;
        });
        if (clash) continue;
        objects.push_back(std::move(obj));
        placed = true;
      }
      if (!placed) {
        throw Error(ErrorCode::kFovInfeasible, "could not place object " + std::to_string(o + 1) + " in frame " +
                                                   std::to_string(f) + " without overlap");
      }
    }

    auto far_from_objects = [&](const Vec3& p, double clearance) {
      return std::all_of(objects.begin(), objects.end(),
                         [&](const SynthObject& o) { return (p - o.centroid).norm() > clearance; });
    };

    // Wrong-depth points sharing a pixel ray with a real object point.
    for (SynthObject& obj : objects) {
      const auto n = static_cast<int>(obj.points.size());
      const int count = cfg.fp_rate > 0.0 ? std::max(1, static_cast<int>(std::lround(cfg.fp_rate * n))) : 0;
      for (int b = 0; b < count; ++b) {
        for (int attempt = 0; attempt < 50; ++attempt) {
          const RadarPoint& src = obj.points[static_cast<std::size_t>(rng.uniform_int(0, n - 1))];
          const Vec3 q = transform_point(T, src.position);
          const Vec3 q_far = q * ((q.z() + rng.uniform(3.0, 8.0)) / q.z());
          RadarPoint bait;
          bait.position = transform_point(T_inv, q_far);
          if (!far_from_objects(bait.position, clutter_clearance)) continue;
          bait.rcs = rng.uniform(obj.mean_rcs - obj.rcs_spread * (1.0 - 1.0 / n),
                                 obj.mean_rcs + obj.rcs_spread * (1.0 - 1.0 / n));
          bait.radial_velocity = rng.uniform(obj.mean_velocity - obj.velocity_spread * (1.0 - 1.0 / n),
                                             obj.mean_velocity + obj.velocity_spread * (1.0 - 1.0 / n));
          obj.fp_bait.push_back(bait);
          break;
        }
      }
    }

    // Real object points near the centroid whose pixel falls in a mask hole.
    for (SynthObject& obj : objects) {
      const auto n = static_cast<int>(obj.points.size());
      const int count = cfg.fn_rate > 0.0 ? std::max(1, static_cast<int>(std::lround(cfg.fn_rate * n))) : 0;
      for (int b = 0; b < count; ++b) {
        for (int attempt = 0; attempt < 50; ++attempt) {
          RadarPoint bait;
          bait.position = obj.centroid + rng.uniform(0.0, 0.4) * random_direction(rng);
          bait.radial_velocity = obj.mean_velocity;
          bait.rcs = obj.mean_rcs + rng.uniform(-0.3, 0.3) * obj.rcs_spread;
          const auto px = project(K, T, bait.position);
          if (!inside_image(px, K, 1.0)) continue;
          const auto hole = pixel_index(*px);
          if (!obj.rect.contains(hole.first, hole.second)) continue;
          std::vector<std::pair<int, int>> holes = obj.holes;
          holes.push_back(hole);
          auto hit = [&](const RadarPoint& p) {
            const auto ppx = project(K, T, p.position);
            if (!ppx) return false;
            const auto [col, row] = pixel_index(*ppx);
            return in_hole(holes, col, row);
          };
          if (std::any_of(obj.points.begin(), obj.points.end(), hit) ||
              std::any_of(obj.fp_bait.begin(), obj.fp_bait.end(), hit)) {
            continue;
          }
          obj.holes = std::move(holes);
          obj.fn_bait.push_back(bait);
          break;
        }
      }
    }

    LabelFrame frame;
    frame.timestamp = f * cfg.frame_period;
    struct Entry {
      RadarPoint point;
      std::optional<InstanceLabel> gt;
      PointRole role;
    };
    std::vector<Entry> entries;
    for (const SynthObject& obj : objects) {
      for (const RadarPoint& p : obj.points) entries.push_back({p, obj.label, PointRole::kObject});
      for (const RadarPoint& p : obj.fp_bait) entries.push_back({p, std::nullopt, PointRole::kFalsePositiveBait});
      for (const RadarPoint& p : obj.fn_bait) entries.push_back({p, obj.label, PointRole::kFalseNegativeBait});

      std::vector<std::uint8_t> dense(static_cast<std::size_t>(K.width) * static_cast<std::size_t>(K.height), 0);
      for (int row = obj.rect.row0; row <= obj.rect.row1; ++row) {
        for (int col = obj.rect.col0; col <= obj.rect.col1; ++col) {
          if (!in_hole(obj.holes, col, row)) dense[static_cast<std::size_t>(row) * K.width + col] = 1;
        }
      }
      frame.masks.push_back({BinaryMask::from_dense(K.width, K.height, dense), obj.label.class_id,
                             obj.label.instance_id, obj.confidence});
    }

    for (int c = 0; c < cfg.clutter_points; ++c) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxPlacementTries && !placed; ++attempt) {
        SphericalReturn s;
        s.range = rng.uniform(2.0, 60.0);
        s.azimuth = rng.uniform(-55.0, 55.0) * kDeg;
        s.elevation = rng.uniform(-10.0, 10.0) * kDeg;
        const Vec3 p = sph2cart(s);
        if (!far_from_objects(p, clutter_clearance)) continue;
        const auto px = project(K, T, p);
        if (px) {
          const auto [col, row] = pixel_index(*px);
          const bool in_mask = std::any_of(objects.begin(), objects.end(),
                                           [&](const SynthObject& o) { return o.rect.contains(col, row); });
          if (in_mask) continue;
        }
        entries.push_back({RadarPoint{p, rng.normal(0.0, 1.0), rng.uniform(-10.0, 20.0)}, std::nullopt,
                           PointRole::kClutter});
        placed = true;
      }
    }

    rng.shuffle(entries);
    for (Entry& e : entries) {
      frame.points.push_back(e.point);
      frame.ground_truth.push_back(e.gt);
      frame.roles.push_back(e.role);
    }
    scene.frames.push_back(std::move(frame));
  }
  return scene;
}

}  // namespace radcal
