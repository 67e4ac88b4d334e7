#include "radcal/autolabel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "radcal/error.hpp"

namespace radcal {

void LabelParams::validate() const {
  if (!(depth_tolerance > 0.0) || !(rcs_sigma_scale > 0.0) || !(velocity_sigma_scale > 0.0) ||
      !(static_speed > 0.0) || !(min_velocity_sigma > 0.0) || !(search_radius > 0.0) || !(position_sigma > 0.0) ||
      !(min_rcs_sigma > 0.0) || min_cluster_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "label parameters must be positive");
  }
  if (!(affinity_threshold > 0.0 && affinity_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "affinity threshold must lie in (0, 1]");
  }
}

CoarseAssociation coarse_associate(std::span<const RadarPoint> points, std::span<const InstanceMask> masks,
                                   const CameraIntrinsics& K, const Extrinsics& T) {
  std::set<int> seen_ids;
  for (const InstanceMask& m : masks) {
    if (m.mask.width() != K.width || m.mask.height() != K.height) {
      throw Error(ErrorCode::kDimensionMismatch, "mask of instance " + std::to_string(m.instance_id) + " is " +
                                                     std::to_string(m.mask.width()) + "x" +
                                                     std::to_string(m.mask.height()) + ", camera is " +
                                                     std::to_string(K.width) + "x" + std::to_string(K.height));
    }
    if (!seen_ids.insert(m.instance_id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate instance id " + std::to_string(m.instance_id));
    }
  }

  CoarseAssociation out;
  out.labels.resize(points.size());
  out.depths.resize(points.size());
  std::map<int, std::size_t> chosen_by_id;  // instance id -> mask index, for cluster ordering

  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 p_cam = transform_point(T, points[i].position);
    out.depths[i] = p_cam.z();
    const auto px = project_camera_point(K, p_cam);
    if (!px || !(px->u >= 1.0 && px->u <= K.width && px->v >= 1.0 && px->v <= K.height)) {
      out.unassociated.push_back(i);
      continue;
    }
    const int col = std::clamp(static_cast<int>(std::lround(px->u)) - 1, 0, K.width - 1);
    const int row = std::clamp(static_cast<int>(std::lround(px->v)) - 1, 0, K.height - 1);

    const InstanceMask* best = nullptr;
    std::size_t best_index = 0;
    for (std::size_t j = 0; j < masks.size(); ++j) {
      const InstanceMask& m = masks[j];
      if (!m.mask.contains(col, row)) continue;
      if (!best || m.confidence > best->confidence ||
          (m.confidence == best->confidence && m.instance_id < best->instance_id)) {
        best = &m;
        best_index = j;
      }
    }
    if (!best) {
      out.unassociated.push_back(i);
      continue;
    }
    out.labels[i] = InstanceLabel{best->class_id, best->instance_id};
    chosen_by_id.emplace(best->instance_id, best_index);
  }

  for (const auto& [id, j] : chosen_by_id) {
    PointCluster c;
    c.label = {masks[j].class_id, masks[j].instance_id};
    c.confidence = masks[j].confidence;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (out.labels[i] && out.labels[i]->instance_id == id) c.members.push_back(i);
    }
    out.clusters.push_back(std::move(c));
  }
  return out;
}

ClusterStats cluster_stats(std::span<const std::size_t> members, std::span<const RadarPoint> points,
                           std::span<const double> depths) {
  if (members.empty()) throw Error(ErrorCode::kEmptyInput, "statistics of an empty cluster");
  ClusterStats s;
  s.count = members.size();
  const double n = static_cast<double>(s.count);

  std::vector<double> z;
  z.reserve(members.size());
  for (std::size_t m : members) {
    z.push_back(depths[m]);
    s.mean_rcs += points[m].rcs;
    s.mean_velocity += points[m].radial_velocity;
    s.centroid += points[m].position;
  }
  s.mean_rcs /= n;
  s.mean_velocity /= n;
  s.centroid /= n;

  double var_rcs = 0.0;
  double var_vel = 0.0;
  for (std::size_t m : members) {
    var_rcs += (points[m].rcs - s.mean_rcs) * (points[m].rcs - s.mean_rcs);
    var_vel += (points[m].radial_velocity - s.mean_velocity) * (points[m].radial_velocity - s.mean_velocity);
  }
  s.std_rcs = std::sqrt(var_rcs / n);
  s.std_velocity = std::sqrt(var_vel / n);

  std::sort(z.begin(), z.end());
  const std::size_t mid = z.size() / 2;
  s.median_depth = z.size() % 2 == 1 ? z[mid] : 0.5 * (z[mid - 1] + z[mid]);
  return s;
}

bool depth_valid(double depth, const ClusterStats& s, const LabelParams& p) {
  return std::abs(depth - s.median_depth) < p.depth_tolerance;
}

bool rcs_valid(double rcs, const ClusterStats& s, const LabelParams& p) {
  return std::abs(rcs - s.mean_rcs) <= p.rcs_sigma_scale * s.std_rcs;
}

bool vel_valid(double radial_velocity, const ClusterStats& s, const LabelParams& p) {
  if (std::abs(s.mean_velocity) <= p.static_speed) return true;
  return std::abs(radial_velocity - s.mean_velocity) <=
         p.velocity_sigma_scale * std::max(s.std_velocity, p.min_velocity_sigma);
}

FilterOutcome filter_cluster(std::span<const std::size_t> members, std::span<const RadarPoint> points,
                             std::span<const double> depths, const ClusterStats& stats, const LabelParams& p) {
  FilterOutcome out;
  if (members.size() < static_cast<std::size_t>(p.min_cluster_size)) {
    out.kept.assign(members.begin(), members.end());
    return out;
  }
  for (std::size_t m : members) {
    const RadarPoint& pt = points[m];
    if (depth_valid(depths[m], stats, p) && rcs_valid(pt.rcs, stats, p) && vel_valid(pt.radial_velocity, stats, p)) {
      out.kept.push_back(m);
    } else {
      out.removed.push_back(m);
    }
  }
  return out;
}

double affinity(const RadarPoint& candidate, const ClusterStats& stats, const LabelParams& p) {
  const double d_pos2 = (candidate.position - stats.centroid).squaredNorm();
  const double d_v = candidate.radial_velocity - stats.mean_velocity;
  const double d_rho = candidate.rcs - stats.mean_rcs;
  const double sigma_v = std::max(stats.std_velocity, p.min_velocity_sigma);
  const double sigma_rho = std::max(stats.std_rcs, p.min_rcs_sigma);
  return std::exp(-d_pos2 / (2.0 * p.position_sigma * p.position_sigma)) *
         std::exp(-(d_v * d_v) / (2.0 * sigma_v * sigma_v)) *
         std::exp(-(d_rho * d_rho) / (2.0 * sigma_rho * sigma_rho));
}

std::vector<Recovery> complete_clusters(std::vector<PointCluster>& clusters, const std::vector<bool>& eligible,
                                        std::span<const std::size_t> unassociated,
                                        std::span<const RadarPoint> points, std::span<const double> depths,
                                        const LabelParams& p) {
  std::vector<std::optional<ClusterStats>> stats(clusters.size());
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    if (eligible[j] && !clusters[j].members.empty()) stats[j] = cluster_stats(clusters[j].members, points, depths);
  }

  std::vector<Recovery> recovered;
  for (std::size_t u : unassociated) {
    std::optional<Recovery> best;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (!stats[j]) continue;
      if ((points[u].position - stats[j]->centroid).norm() > p.search_radius) continue;
      const double a = affinity(points[u], *stats[j], p);
      if (a < p.affinity_threshold) continue;
      if (!best || a > best->affinity) best = Recovery{u, j, a};
    }
    if (best) recovered.push_back(*best);
  }

  for (const Recovery& r : recovered) clusters[r.cluster].members.push_back(r.point);
  for (PointCluster& c : clusters) std::sort(c.members.begin(), c.members.end());
  return recovered;
}

FrameLabels autolabel_frame(std::span<const RadarPoint> points, std::span<const InstanceMask> masks,
                            const CameraIntrinsics& K, const Extrinsics& T, const LabelParams& params,
                            LabelStage stage) {
  params.validate();
  CoarseAssociation coarse = coarse_associate(points, masks, K, T);

  FrameLabels out;
  out.labels = coarse.labels;
  out.provenance.assign(points.size(), Provenance::kUnlabeled);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (coarse.labels[i]) out.provenance[i] = Provenance::kCoarse;
  }
  out.coarse_clusters = coarse.clusters;
  out.refined_clusters = coarse.clusters;
  if (stage == LabelStage::kCoarse) {
    out.final_clusters = coarse.clusters;
    return out;
  }

  // Gate filtering against statistics of the unfiltered cluster.
  std::vector<bool> eligible(coarse.clusters.size(), false);
  std::vector<std::size_t> unassociated = coarse.unassociated;
  for (std::size_t j = 0; j < out.refined_clusters.size(); ++j) {
    PointCluster& c = out.refined_clusters[j];
    if (c.members.size() < static_cast<std::size_t>(params.min_cluster_size)) continue;
    eligible[j] = true;
    const ClusterStats s = cluster_stats(c.members, points, coarse.depths);
    FilterOutcome f = filter_cluster(c.members, points, coarse.depths, s, params);
    for (std::size_t r : f.removed) {
      out.labels[r].reset();
      out.provenance[r] = Provenance::kFilteredOut;
      unassociated.push_back(r);
    }
    c.members = std::move(f.kept);
  }
  std::sort(unassociated.begin(), unassociated.end());

  out.final_clusters = out.refined_clusters;
  if (stage == LabelStage::kOtpf) return out;

  // Completion against statistics recomputed on the refined clusters.
  const std::vector<Recovery> recovered =
      complete_clusters(out.final_clusters, eligible, unassociated, points, coarse.depths, params);
  for (const Recovery& r : recovered) {
    out.labels[r.point] = out.final_clusters[r.cluster].label;
    out.provenance[r.point] = Provenance::kRecovered;
  }
  return out;
}

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::kCoarse: return "coarse";
    case Provenance::kFilteredOut: return "filtered_out";
    case Provenance::kRecovered: return "recovered";
    case Provenance::kUnlabeled: return "unlabeled";
  }
  return "unlabeled";
}

const char* to_string(LabelStage s) noexcept {
  switch (s) {
    case LabelStage::kCoarse: return "coarse";
    case LabelStage::kOtpf: return "otpf";
    case LabelStage::kFull: return "full";
  }
  return "full";
}

}  // namespace radcal
