#pragma once

// Slow, obviously-correct reference implementations used as test oracles.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "radcal/geometry.hpp"
#include "radcal/labels.hpp"

namespace radcal::oracle {

/// O(n²) DBSCAN. Core points are connected through chains of core points
/// within eps; components are ordered by their smallest core index. A border
/// point joins the earliest component that has a core neighbour of it.
inline std::vector<int> dbscan(const std::vector<Vec3>& pts, double eps, int min_points) {
  const std::size_t n = pts.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if ((pts[i] - pts[j]).norm() <= eps) nbr[i].push_back(j);
    }
  }
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = static_cast<int>(nbr[i].size()) >= min_points;

  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || comp[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    comp[i] = next;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b : nbr[a]) {
        if (core[b] && comp[b] < 0) {
          comp[b] = next;
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  std::vector<int> labels(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      labels[i] = comp[i];
      continue;
    }
    int best = -1;
    for (std::size_t j : nbr[i]) {
      if (core[j] && (best < 0 || comp[j] < best)) best = comp[j];
    }
    labels[i] = best;
  }
  return labels;
}

/// Identical partitions up to a relabeling of cluster ids; noise (-1) must match exactly.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] < 0) != (b[i] < 0)) return false;
    if (a[i] < 0) continue;
    const auto [it1, new1] = ab.emplace(a[i], b[i]);
    const auto [it2, new2] = ba.emplace(b[i], a[i]);
    if (it1->second != b[i] || it2->second != a[i]) return false;
  }
  return true;
}

/// Best total IoU over all one-to-one same-class pairings, by exhaustive search.
inline double best_total_iou(const std::vector<std::optional<InstanceLabel>>& pred,
                             const std::vector<std::optional<InstanceLabel>>& gt) {
  std::set<InstanceLabel> ps, gs;
  for (const auto& p : pred) {
    if (p) ps.insert(*p);
  }
  for (const auto& g : gt) {
    if (g) gs.insert(*g);
  }
  const std::vector<InstanceLabel> P(ps.begin(), ps.end()), G(gs.begin(), gs.end());
  auto iou = [&](const InstanceLabel& p, const InstanceLabel& g) {
    if (p.class_id != g.class_id) return 0.0;
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool a = pred[i] && *pred[i] == p;
      const bool b = gt[i] && *gt[i] == g;
      inter += a && b;
      uni += a || b;
    }
    return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
  };
  std::vector<bool> used(G.size(), false);
  double best = 0.0;
  auto rec = [&](auto&& self, std::size_t k, double acc) -> void {
    if (k == P.size()) {
      best = std::max(best, acc);
      return;
    }
    self(self, k + 1, acc);  // leave P[k] unmatched
    for (std::size_t g = 0; g < G.size(); ++g) {
      if (used[g]) continue;
      used[g] = true;
      self(self, k + 1, acc + iou(P[k], G[g]));
      used[g] = false;
    }
  };
  rec(rec, 0, 0.0);
  return best;
}

}  // namespace radcal::oracle
