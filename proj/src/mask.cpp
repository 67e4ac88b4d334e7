#include "radcal/mask.hpp"

#include <algorithm>
#include <string>

#include "radcal/error.hpp"

namespace radcal {

BinaryMask::BinaryMask(int width, int height, std::vector<MaskRun> runs)
    : width_(width), height_(height), runs_(std::move(runs)) {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kInvalidArgument, "mask size must be positive");
  const std::uint64_t total = static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height);
  std::uint64_t end = 0;
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    const MaskRun& r = runs_[i];
    if (r.length == 0) throw Error(ErrorCode::kInvalidArgument, "mask run " + std::to_string(i) + " is empty");
    if (i > 0 && r.start < end) {
      throw Error(ErrorCode::kInvalidArgument, "mask runs overlap or are unsorted at run " + std::to_string(i));
    }
    if (r.start > total || r.length > total - r.start) {
      throw Error(ErrorCode::kInvalidArgument, "mask run " + std::to_string(i) + " exceeds the image");
    }
    end = r.start + r.length;
  }
}

BinaryMask BinaryMask::from_dense(int width, int height, std::span<const std::uint8_t> pixels) {
  const std::size_t total = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (width <= 0 || height <= 0 || pixels.size() != total) {
    throw Error(ErrorCode::kInvalidArgument, "dense mask size does not match width*height");
  }
  std::vector<MaskRun> runs;
  std::size_t i = 0;
  while (i < total) {
    if (!pixels[i]) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < total && pixels[i]) ++i;
    runs.push_back({start, i - start});
  }
  return BinaryMask(width, height, std::move(runs));
}

std::vector<std::uint8_t> BinaryMask::to_dense() const {
  std::vector<std::uint8_t> dense(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0);
  for (const MaskRun& r : runs_) {
    std::fill_n(dense.begin() + static_cast<std::ptrdiff_t>(r.start), r.length, std::uint8_t{1});
  }
  return dense;
}

std::uint64_t BinaryMask::area() const {
  std::uint64_t a = 0;
  for (const MaskRun& r : runs_) a += r.length;
  return a;
}

bool BinaryMask::contains(int col, int row) const {
  if (col < 0 || row < 0 || col >= width_ || row >= height_) return false;
  const std::uint64_t idx = static_cast<std::uint64_t>(row) * static_cast<std::uint64_t>(width_) +
                            static_cast<std::uint64_t>(col);
  // First run starting after idx; the candidate is the one before it.
  auto it = std::upper_bound(runs_.begin(), runs_.end(), idx,
                             [](std::uint64_t value, const MaskRun& r) { return value < r.start; });
  if (it == runs_.begin()) return false;
  --it;
  return idx < it->start + it->length;
}

std::vector<std::uint64_t> flatten_runs(const std::vector<MaskRun>& runs) {
  std::vector<std::uint64_t> flat;
  flat.reserve(2 * runs.size());
  for (const MaskRun& r : runs) {
    flat.push_back(r.start);
    flat.push_back(r.length);
  }
  return flat;
}

std::vector<MaskRun> unflatten_runs(std::span<const std::uint64_t> flat) {
  if (flat.size() % 2 != 0) throw Error(ErrorCode::kInvalidArgument, "RLE list must hold start/length pairs");
  std::vector<MaskRun> runs;
  runs.reserve(flat.size() / 2);
  for (std::size_t i = 0; i < flat.size(); i += 2) runs.push_back({flat[i], flat[i + 1]});
  return runs;
}

}  // namespace radcal
