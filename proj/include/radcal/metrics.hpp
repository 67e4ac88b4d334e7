#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radcal/labels.hpp"

namespace radcal {

/// Observed minus projected pixel offset of one correspondence.
struct Residual {
  double du{0.0};
  double dv{0.0};

  [[nodiscard]] double squared_norm() const { return du * du + dv * dv; }
};

/// Mean Euclidean reprojection error (px). Throws EmptyInput.
[[nodiscard]] double mre(std::span<const Residual> residuals);
/// Root-mean-square reprojection error (px). Throws EmptyInput.
[[nodiscard]] double rmse(std::span<const Residual> residuals);

struct InstanceMatch {
  InstanceLabel pred;
  InstanceLabel gt;
  std::size_t intersection{0};
  std::size_t union_size{0};
  double iou{0.0};  // fraction in (0, 1]
};

struct MatchResult {
  std::vector<InstanceMatch> pairs;
  std::vector<InstanceLabel> unmatched_pred;
  std::vector<InstanceLabel> unmatched_gt;
};

/// Point-set IoU between every same-class pred/gt instance pair, then greedy
/// one-to-one matching in descending IoU (IoU > 0 required).
/// Throws LengthMismatch when the label vectors differ in length.
[[nodiscard]] MatchResult match_instances(std::span<const std::optional<InstanceLabel>> pred,
                                          std::span<const std::optional<InstanceLabel>> gt);

struct PointAccuracy {
  std::size_t correct{0};
  std::size_t total{0};
  std::size_t foreground_correct{0};
  std::size_t foreground_total{0};

  /// Percent over all points (headline number).
  [[nodiscard]] double all_points() const;
  /// Percent over points whose ground truth is labeled.
  [[nodiscard]] double foreground() const;
};

/// A point is correct when both labels are empty, or when its predicted
/// instance is matched to its ground-truth instance.
[[nodiscard]] PointAccuracy point_accuracy(std::span<const std::optional<InstanceLabel>> pred,
                                           std::span<const std::optional<InstanceLabel>> gt,
                                           const MatchResult& matching);
[[nodiscard]] PointAccuracy point_accuracy(std::span<const std::optional<InstanceLabel>> pred,
                                           std::span<const std::optional<InstanceLabel>> gt);

/// Mean IoU over matched pairs, in percent; 0 with no matches.
[[nodiscard]] double miou(const MatchResult& matching);
[[nodiscard]] double miou(std::span<const std::optional<InstanceLabel>> pred,
                          std::span<const std::optional<InstanceLabel>> gt);

/// Frame-level summary combining both label metrics.
struct LabelMetrics {
  PointAccuracy accuracy;
  MatchResult matching;
  double miou{0.0};
};

[[nodiscard]] LabelMetrics evaluate_labels(std::span<const std::optional<InstanceLabel>> pred,
                                           std::span<const std::optional<InstanceLabel>> gt);

}  // namespace radcal
