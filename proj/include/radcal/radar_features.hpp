#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radcal/geometry.hpp"

namespace radcal {

struct RadarFrame {
  double timestamp{0.0};  // s
  std::vector<SphericalReturn> returns;
};

/// Pre-clustering gates. Defaults are the calibration working values.
struct FilterParams {
  double min_range{3.0};   // m, inclusive
  double max_range{15.0};  // m, inclusive
  double max_speed{0.5};   // m/s, |v| must be strictly below
  double min_rcs{10.0};    // dBsm, rcs must be strictly above

  void validate() const;
};

struct ClusterParams {
  double eps{0.3};  // m
  int min_points{3};

  void validate() const;
};

/// Output of dbscan(). `labels[i]` is the cluster index of point i or -1 for noise.
/// Clusters are numbered in creation order, i.e. by their lowest-index core point.
struct DbscanResult {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> noise;
  std::vector<int> labels;
};

/// A cluster over the filtered returns with cached statistics.
struct Cluster {
  std::vector<std::size_t> members;  // indices into the filtered returns, ascending
  double mean_rcs{0.0};
  double mean_range{0.0};
  Vec3 centroid{Vec3::Zero()};
};

enum class ExtractionStatus { kFound, kEmptyAfterFilter, kNoClusters };

struct ReflectorDetection {
  ExtractionStatus status{ExtractionStatus::kNoClusters};
  Vec3 center{Vec3::Zero()};    // radar frame
  std::size_t return_index{0};  // index into the frame's returns
  double rcs{0.0};

  [[nodiscard]] bool found() const { return status == ExtractionStatus::kFound; }
};

/// Indices (ascending) of the returns passing the range, speed and RCS gates.
[[nodiscard]] std::vector<std::size_t> filter_returns(const RadarFrame& frame, const FilterParams& p);

/// DBSCAN over 3D Euclidean distance. A point is core when at least
/// `min_points` points (itself included) lie within distance <= eps.
/// Border points reachable from several clusters go to the earliest cluster.
[[nodiscard]] DbscanResult dbscan(std::span<const Vec3> points, const ClusterParams& p);

/// Builds a Cluster with its mean RCS, mean range and centroid.
[[nodiscard]] Cluster summarize_cluster(std::vector<std::size_t> members, std::span<const SphericalReturn> returns,
                                        std::span<const Vec3> positions);

/// Index of the cluster with maximum mean RCS. Exact ties go to the smaller
/// mean range, then to the earlier cluster. Throws EmptyInput on no clusters.
[[nodiscard]] std::size_t select_corner_cluster(std::span<const Cluster> clusters);

/// Member with maximum RCS; ties resolve to the lowest index.
[[nodiscard]] std::size_t locate_center(const Cluster& cluster, std::span<const SphericalReturn> returns);

/// filter → dbscan → select → locate. Status reports why nothing was found.
[[nodiscard]] ReflectorDetection extract_reflector(const RadarFrame& frame, const FilterParams& fp,
                                                   const ClusterParams& cp);

}  // namespace radcal
