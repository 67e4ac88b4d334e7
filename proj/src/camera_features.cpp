#include "radcal/camera_features.hpp"

#include <cmath>
#include <string>

#include "radcal/error.hpp"

namespace radcal {

void CheckerboardSpec::validate() const {
  if (squares_x < 2 || squares_y < 2) {
    throw Error(ErrorCode::kInvalidArgument, "checkerboard needs at least 2 squares per axis, got " +
                                                 std::to_string(squares_x) + "x" + std::to_string(squares_y));
  }
}

bool CornerSet::within_image(int width, int height) const {
  for (const Pixel& c : corners) {
    if (!(c.u >= 0.0 && c.u <= width && c.v >= 0.0 && c.v <= height)) return false;
  }
  return true;
}

Pixel checkerboard_center(const CornerSet& cs) {
  cs.board.validate();
  const auto expected = static_cast<std::size_t>(cs.board.expected_corners());
  if (cs.corners.size() != expected) {
    throw Error(ErrorCode::kCountMismatch, "expected " + std::to_string(expected) + " corners, got " +
                                               std::to_string(cs.corners.size()));
  }
  double su = 0.0;
  double sv = 0.0;
  for (const Pixel& c : cs.corners) {
    if (!std::isfinite(c.u) || !std::isfinite(c.v)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite corner coordinate");
    }
    su += c.u;
    sv += c.v;
  }
  const double n = static_cast<double>(cs.corners.size());
  return {su / n, sv / n};
}

}  // namespace radcal
