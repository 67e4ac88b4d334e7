#pragma once

#include <compare>

namespace radcal {

/// (class, instance) pair assigned to a labeled radar point. An unlabeled
/// point is represented by an empty std::optional<InstanceLabel>.
struct InstanceLabel {
  int class_id{0};
  int instance_id{0};

  auto operator<=>(const InstanceLabel&) const = default;
};

}  // namespace radcal
