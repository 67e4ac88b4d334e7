#include "radcal/radar_features.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include "radcal/error.hpp"

namespace radcal {

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.x) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.y) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.z) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// Uniform grid with cell size eps: every eps-neighbour lies in the 27 cells around a point.
class NeighborGrid {
 public:
  NeighborGrid(std::span<const Vec3> points, double eps) : points_(points), eps_(eps), eps2_(eps * eps) {
    cells_.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) cells_[key(points[i])].push_back(i);
  }

  void query(std::size_t idx, std::vector<std::size_t>& out) const {
    out.clear();
    const Vec3& p = points_[idx];
    const CellKey c = key(p);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == cells_.end()) continue;
          for (std::size_t j : it->second) {
            if ((points_[j] - p).squaredNorm() <= eps2_) out.push_back(j);
          }
        }
      }
    }
  }

 private:
  CellKey key(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x() / eps_)), static_cast<std::int64_t>(std::floor(p.y() / eps_)),
            static_cast<std::int64_t>(std::floor(p.z() / eps_))};
  }

  std::span<const Vec3> points_;
  double eps_;
  double eps2_;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> cells_;
};

constexpr int kUnvisited = -2;
constexpr int kNoise = -1;

}  // namespace

void FilterParams::validate() const {
  if (!(min_range >= 0.0 && min_range < max_range)) {
    throw Error(ErrorCode::kInvalidArgument, "filter requires 0 <= min_range < max_range");
  }
  if (!(max_speed > 0.0)) throw Error(ErrorCode::kInvalidArgument, "filter speed threshold must be positive");
  if (!std::isfinite(min_rcs)) throw Error(ErrorCode::kInvalidArgument, "filter RCS threshold must be finite");
}

void ClusterParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::kInvalidArgument, "dbscan eps must be positive");
  if (min_points < 1) throw Error(ErrorCode::kInvalidArgument, "dbscan min_points must be >= 1");
}

std::vector<std::size_t> filter_returns(const RadarFrame& frame, const FilterParams& p) {
  p.validate();
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < frame.returns.size(); ++i) {
    const SphericalReturn& r = frame.returns[i];
    if (r.range >= p.min_range && r.range <= p.max_range && std::abs(r.radial_velocity) < p.max_speed &&
        r.rcs > p.min_rcs) {
      kept.push_back(i);
    }
  }
  return kept;
}

DbscanResult dbscan(std::span<const Vec3> points, const ClusterParams& p) {
  p.validate();
  for (const Vec3& q : points) {
    if (!q.allFinite()) throw Error(ErrorCode::kInvalidArgument, "dbscan input contains non-finite coordinates");
  }

  DbscanResult result;
  result.labels.assign(points.size(), kUnvisited);
  const NeighborGrid grid(points, p.eps);
  const auto min_pts = static_cast<std::size_t>(p.min_points);

  std::vector<std::size_t> neighbors;
  std::deque<std::size_t> frontier;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (result.labels[i] != kUnvisited) continue;
    grid.query(i, neighbors);
    if (neighbors.size() < min_pts) {
      result.labels[i] = kNoise;  // may still become a border point later
      continue;
    }

    const int cluster_id = static_cast<int>(result.clusters.size());
    result.clusters.emplace_back();
    result.labels[i] = cluster_id;
    frontier.assign(neighbors.begin(), neighbors.end());
    while (!frontier.empty()) {
      const std::size_t j = frontier.front();
      frontier.pop_front();
      if (result.labels[j] == kNoise) {
        result.labels[j] = cluster_id;
        continue;
      }
      if (result.labels[j] != kUnvisited) continue;
      result.labels[j] = cluster_id;
      grid.query(j, neighbors);
      if (neighbors.size() >= min_pts) frontier.insert(frontier.end(), neighbors.begin(), neighbors.end());
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (result.labels[i] == kNoise) {
      result.noise.push_back(i);
    } else {
      result.clusters[static_cast<std::size_t>(result.labels[i])].push_back(i);
    }
  }
  return result;
}

Cluster summarize_cluster(std::vector<std::size_t> members, std::span<const SphericalReturn> returns,
                          std::span<const Vec3> positions) {
  if (members.empty()) throw Error(ErrorCode::kEmptyInput, "cluster has no members");
  Cluster c;
  c.members = std::move(members);
  for (std::size_t m : c.members) {
    c.mean_rcs += returns[m].rcs;
    c.mean_range += returns[m].range;
    c.centroid += positions[m];
  }
  const double n = static_cast<double>(c.members.size());
  c.mean_rcs /= n;
  c.mean_range /= n;
  c.centroid /= n;
  return c;
}

std::size_t select_corner_cluster(std::span<const Cluster> clusters) {
  if (clusters.empty()) throw Error(ErrorCode::kEmptyInput, "no clusters to select from");
  std::size_t best = 0;
  for (std::size_t j = 1; j < clusters.size(); ++j) {
    const Cluster& c = clusters[j];
    const Cluster& b = clusters[best];
    if (c.mean_rcs > b.mean_rcs || (c.mean_rcs == b.mean_rcs && c.mean_range < b.mean_range)) best = j;
  }
  return best;
}

std::size_t locate_center(const Cluster& cluster, std::span<const SphericalReturn> returns) {
  if (cluster.members.empty()) throw Error(ErrorCode::kEmptyInput, "cluster has no members");
  std::size_t best = cluster.members.front();
  for (std::size_t m : cluster.members) {
    if (returns[m].rcs > returns[best].rcs || (returns[m].rcs == returns[best].rcs && m < best)) best = m;
  }
  return best;
}

ReflectorDetection extract_reflector(const RadarFrame& frame, const FilterParams& fp, const ClusterParams& cp) {
  ReflectorDetection det;
  const std::vector<std::size_t> kept = filter_returns(frame, fp);
  if (kept.empty()) {
    det.status = ExtractionStatus::kEmptyAfterFilter;
    return det;
  }

  std::vector<SphericalReturn> filtered;
  std::vector<Vec3> xyz;
  filtered.reserve(kept.size());
  xyz.reserve(kept.size());
  for (std::size_t i : kept) {
    filtered.push_back(frame.returns[i]);
    xyz.push_back(sph2cart(frame.returns[i]));
  }

  DbscanResult db = dbscan(xyz, cp);
  if (db.clusters.empty()) {
    det.status = ExtractionStatus::kNoClusters;
    return det;
  }
  std::vector<Cluster> clusters;
  clusters.reserve(db.clusters.size());
  for (auto& members : db.clusters) clusters.push_back(summarize_cluster(std::move(members), filtered, xyz));

  const Cluster& corner = clusters[select_corner_cluster(clusters)];
  const std::size_t apex = locate_center(corner, filtered);
  det.status = ExtractionStatus::kFound;
  det.return_index = kept[apex];
  det.center = sph2cart(filtered[apex]);
  det.rcs = filtered[apex].rcs;
  return det;
}

}  // namespace radcal
