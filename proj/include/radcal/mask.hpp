#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace radcal {

/// One run of set pixels over row-major pixel order (index = row * width + col).
struct MaskRun {
  std::uint64_t start{0};
  std::uint64_t length{0};

  bool operator==(const MaskRun&) const = default;
};

/// Binary H×W mask stored as sorted, non-overlapping, non-empty runs.
class BinaryMask {
 public:
  BinaryMask() = default;
  /// Throws InvalidArgument if the runs are unsorted, overlapping, empty or out of bounds.
  BinaryMask(int width, int height, std::vector<MaskRun> runs);

  [[nodiscard]] static BinaryMask from_dense(int width, int height, std::span<const std::uint8_t> pixels);
  [[nodiscard]] std::vector<std::uint8_t> to_dense() const;

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] const std::vector<MaskRun>& runs() const { return runs_; }
  [[nodiscard]] std::uint64_t area() const;

  /// Zero-based column/row lookup; false outside the image.
  [[nodiscard]] bool contains(int col, int row) const;

  bool operator==(const BinaryMask&) const = default;

 private:
  int width_{0};
  int height_{0};
  std::vector<MaskRun> runs_;
};

/// Flat [start, len, start, len, ...] encoding used by mask files.
[[nodiscard]] std::vector<std::uint64_t> flatten_runs(const std::vector<MaskRun>& runs);
/// Throws InvalidArgument on odd-length input.
[[nodiscard]] std::vector<MaskRun> unflatten_runs(std::span<const std::uint64_t> flat);

}  // namespace radcal
