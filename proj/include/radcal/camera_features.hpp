#pragma once

#include <vector>

#include "radcal/geometry.hpp"

namespace radcal {

/// Checkerboard described by its square counts; inner corners form an
/// (Nx − 1) × (Ny − 1) grid.
struct CheckerboardSpec {
  int squares_x{0};
  int squares_y{0};

  [[nodiscard]] int expected_corners() const { return (squares_x - 1) * (squares_y - 1); }
  void validate() const;
};

/// Sub-pixel refined inner corners of one board observation.
struct CornerSet {
  std::vector<Pixel> corners;
  CheckerboardSpec board;

  /// True when every corner lies in [0, W] × [0, H].
  [[nodiscard]] bool within_image(int width, int height) const;
};

/// Centroid of the inner corners; used as the image-plane position of the
/// reflector mounted behind the board centre.
/// Throws CountMismatch when the corner count does not match the board.
[[nodiscard]] Pixel checkerboard_center(const CornerSet& cs);

}  // namespace radcal
