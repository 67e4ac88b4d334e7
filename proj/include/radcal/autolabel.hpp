#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radcal/geometry.hpp"
#include "radcal/labels.hpp"
#include "radcal/mask.hpp"

namespace radcal {

/// Cartesian radar point in the radar frame.
struct RadarPoint {
  Vec3 position{Vec3::Zero()};  // m
  double radial_velocity{0.0};  // m/s
  double rcs{0.0};              // dBsm
};

/// One segmented instance from the image.
struct InstanceMask {
  BinaryMask mask;
  int class_id{1};
  int instance_id{1};
  double confidence{1.0};  // [0, 1]
};

struct LabelParams {
  double depth_tolerance{1.5};     // m
  double rcs_sigma_scale{2.5};     // κ_ρ
  double velocity_sigma_scale{2.0};  // κ_v
  double static_speed{0.3};        // m/s
  double min_velocity_sigma{0.2};  // m/s
  double search_radius{2.0};       // m
  double position_sigma{0.8};      // m
  double affinity_threshold{0.6};  // (0, 1]
  int min_cluster_size{3};
  double min_rcs_sigma{1.0};  // dBsm floor inside the affinity only

  void validate() const;
};

enum class LabelStage { kCoarse, kOtpf, kFull };

enum class Provenance {
  kCoarse,       // labeled by projection and kept
  kFilteredOut,  // labeled by projection, rejected by the gates, not recovered
  kRecovered,    // added back by completion
  kUnlabeled,    // never labeled
};

struct ClusterStats {
  double median_depth{0.0};  // camera-frame z, m
  double mean_rcs{0.0};
  double std_rcs{0.0};  // population std
  double mean_velocity{0.0};
  double std_velocity{0.0};
  Vec3 centroid{Vec3::Zero()};  // radar frame
  std::size_t count{0};
};

/// Points sharing one instance. Members are ascending point indices.
struct PointCluster {
  InstanceLabel label;
  double confidence{0.0};
  std::vector<std::size_t> members;
};

struct CoarseAssociation {
  std::vector<std::optional<InstanceLabel>> labels;
  std::vector<double> depths;             // camera-frame z per point (any sign)
  std::vector<PointCluster> clusters;     // ascending instance id
  std::vector<std::size_t> unassociated;  // ascending
};

/// Projects every point and labels it with the highest-confidence mask
/// covering its rounded pixel. A projection is usable when z_cam > 0 and
/// 1 <= u <= W, 1 <= v <= H; the mask is sampled at column round(u) − 1,
/// row round(v) − 1. Confidence ties go to the smaller instance id.
/// Throws DimensionMismatch when a mask is not W×H, InvalidArgument on
/// duplicate instance ids.
[[nodiscard]] CoarseAssociation coarse_associate(std::span<const RadarPoint> points,
                                                 std::span<const InstanceMask> masks, const CameraIntrinsics& K,
                                                 const Extrinsics& T);

/// Median depth, mean/std of RCS and velocity, centroid. Throws EmptyInput.
[[nodiscard]] ClusterStats cluster_stats(std::span<const std::size_t> members, std::span<const RadarPoint> points,
                                         std::span<const double> depths);

[[nodiscard]] bool depth_valid(double depth, const ClusterStats& s, const LabelParams& p);
[[nodiscard]] bool rcs_valid(double rcs, const ClusterStats& s, const LabelParams& p);
[[nodiscard]] bool vel_valid(double radial_velocity, const ClusterStats& s, const LabelParams& p);

struct FilterOutcome {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
};

/// Keeps the members passing all three gates. Clusters smaller than
/// min_cluster_size pass through untouched.
[[nodiscard]] FilterOutcome filter_cluster(std::span<const std::size_t> members, std::span<const RadarPoint> points,
                                           std::span<const double> depths, const ClusterStats& stats,
                                           const LabelParams& p);

/// Product of unit-peak Gaussians over position, velocity and RCS distance.
[[nodiscard]] double affinity(const RadarPoint& candidate, const ClusterStats& stats, const LabelParams& p);

struct Recovery {
  std::size_t point{0};
  std::size_t cluster{0};  // index into the cluster list
  double affinity{0.0};
};

/// Assigns each unassociated point within search_radius of a cluster centroid
/// to the cluster of highest affinity, provided it reaches the threshold.
/// Clusters flagged false in `eligible` neither filter nor recover. Returns
/// the assignments and appends them to the clusters.
std::vector<Recovery> complete_clusters(std::vector<PointCluster>& clusters, const std::vector<bool>& eligible,
                                        std::span<const std::size_t> unassociated,
                                        std::span<const RadarPoint> points, std::span<const double> depths,
                                        const LabelParams& p);

struct FrameLabels {
  std::vector<std::optional<InstanceLabel>> labels;
  std::vector<Provenance> provenance;
  std::vector<PointCluster> coarse_clusters;
  std::vector<PointCluster> refined_clusters;
  std::vector<PointCluster> final_clusters;
};

/// Coarse association, then (per stage) gate filtering and completion.
[[nodiscard]] FrameLabels autolabel_frame(std::span<const RadarPoint> points, std::span<const InstanceMask> masks,
                                          const CameraIntrinsics& K, const Extrinsics& T, const LabelParams& params,
                                          LabelStage stage = LabelStage::kFull);

[[nodiscard]] const char* to_string(Provenance p) noexcept;
[[nodiscard]] const char* to_string(LabelStage s) noexcept;

}  // namespace radcal
