#include "radcal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "radcal/error.hpp"

namespace radcal {

namespace {

using LabelSpan = std::span<const std::optional<InstanceLabel>>;

void check_aligned(LabelSpan pred, LabelSpan gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction has " + std::to_string(pred.size()) +
                                                " points, ground truth has " + std::to_string(gt.size()));
  }
}

std::map<InstanceLabel, std::size_t> instance_sizes(LabelSpan labels) {
  std::map<InstanceLabel, std::size_t> sizes;
  for (const auto& l : labels) {
    if (l) ++sizes[*l];
  }
  return sizes;
}

}  // namespace

double mre(std::span<const Residual> residuals) {
  if (residuals.empty()) throw Error(ErrorCode::kEmptyInput, "MRE of an empty residual set");
  double sum = 0.0;
  for (const Residual& r : residuals) sum += std::sqrt(r.squared_norm());
  return sum / static_cast<double>(residuals.size());
}

double rmse(std::span<const Residual> residuals) {
  if (residuals.empty()) throw Error(ErrorCode::kEmptyInput, "RMSE of an empty residual set");
  double sum = 0.0;
  for (const Residual& r : residuals) sum += r.squared_norm();
  return std::sqrt(sum / static_cast<double>(residuals.size()));
}

MatchResult match_instances(LabelSpan pred, LabelSpan gt) {
  check_aligned(pred, gt);
  const auto pred_sizes = instance_sizes(pred);
  const auto gt_sizes = instance_sizes(gt);

  std::map<std::pair<InstanceLabel, InstanceLabel>, std::size_t> overlap;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] && gt[i] && pred[i]->class_id == gt[i]->class_id) ++overlap[{*pred[i], *gt[i]}];
  }

  std::vector<InstanceMatch> candidates;
  candidates.reserve(overlap.size());
  for (const auto& [key, inter] : overlap) {
    InstanceMatch m;
    m.pred = key.first;
    m.gt = key.second;
    m.intersection = inter;
    m.union_size = pred_sizes.at(key.first) + gt_sizes.at(key.second) - inter;
    m.iou = static_cast<double>(inter) / static_cast<double>(m.union_size);
    candidates.push_back(m);
  }
  // Descending IoU; exact ties broken by label order for determinism.
  std::stable_sort(candidates.begin(), candidates.end(), [](const InstanceMatch& a, const InstanceMatch& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tie(a.gt, a.pred) < std::tie(b.gt, b.pred);
  });

  MatchResult result;
  std::set<InstanceLabel> used_pred;
  std::set<InstanceLabel> used_gt;
  for (const InstanceMatch& m : candidates) {
    if (used_pred.contains(m.pred) || used_gt.contains(m.gt)) continue;
    used_pred.insert(m.pred);
    used_gt.insert(m.gt);
    result.pairs.push_back(m);
  }
  for (const auto& [label, size] : pred_sizes) {
    if (!used_pred.contains(label)) result.unmatched_pred.push_back(label);
  }
  for (const auto& [label, size] : gt_sizes) {
    if (!used_gt.contains(label)) result.unmatched_gt.push_back(label);
  }
  return result;
}

double PointAccuracy::all_points() const {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

double PointAccuracy::foreground() const {
  return foreground_total == 0 ? 0.0
                               : 100.0 * static_cast<double>(foreground_correct) / static_cast<double>(foreground_total);
}

PointAccuracy point_accuracy(LabelSpan pred, LabelSpan gt, const MatchResult& matching) {
  check_aligned(pred, gt);
  std::map<InstanceLabel, InstanceLabel> pred_to_gt;
  for (const InstanceMatch& m : matching.pairs) pred_to_gt.emplace(m.pred, m.gt);

  PointAccuracy acc;
  acc.total = pred.size();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    bool ok = false;
    if (!pred[i] && !gt[i]) {
      ok = true;
    } else if (pred[i] && gt[i]) {
      const auto it = pred_to_gt.find(*pred[i]);
      ok = it != pred_to_gt.end() && it->second == *gt[i];
    }
    if (ok) ++acc.correct;
    if (gt[i]) {
      ++acc.foreground_total;
      if (ok) ++acc.foreground_correct;
    }
  }
  return acc;
}

PointAccuracy point_accuracy(LabelSpan pred, LabelSpan gt) {
  return point_accuracy(pred, gt, match_instances(pred, gt));
}

double miou(const MatchResult& matching) {
  if (matching.pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const InstanceMatch& m : matching.pairs) sum += m.iou;
  return 100.0 * sum / static_cast<double>(matching.pairs.size());
}

double miou(LabelSpan pred, LabelSpan gt) { return miou(match_instances(pred, gt)); }

LabelMetrics evaluate_labels(LabelSpan pred, LabelSpan gt) {
  LabelMetrics m;
  m.matching = match_instances(pred, gt);
  m.accuracy = point_accuracy(pred, gt, m.matching);
  m.miou = miou(m.matching);
  return m;
}

}  // namespace radcal
