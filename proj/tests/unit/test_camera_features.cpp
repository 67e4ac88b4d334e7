#include <gtest/gtest.h>

#include <cmath>

#include "radcal/camera_features.hpp"
#include "radcal/error.hpp"

using namespace radcal;

TEST(Checkerboard, ExpectedCorners) {
  EXPECT_EQ((CheckerboardSpec{8, 6}.expected_corners()), 35);
  EXPECT_EQ((CheckerboardSpec{2, 2}.expected_corners()), 1);
  EXPECT_THROW((CheckerboardSpec{1, 6}.validate()), Error);
}

TEST(Checkerboard, CenterOfTwentyFourCorners) {
  // Values and their mean from numpy.
  const double xy[24][2] = {{168.519, 289.448}, {741.02, 565.73},   {175.303, 446.502}, {483.241, 227.791},
                            {687.662, 190.938}, {412.983, 513.392}, {444.502, 569.439}, {690.27, 865.014},
                            {327.361, 618.838}, {656.973, 334.177}, {101.192, 878.768}, {338.721, 351.189},
                            {813.369, 568.13},  {477.048, 718.622}, {124.277, 665.572}, {399.395, 172.682},
                            {628.4, 845.171},   {265.753, 604.072}, {338.53, 693.405},  {677.732, 274.972},
                            {763.909, 626.122}, {646.239, 756.061}, {442.858, 706.964}, {802.784, 181.856}};
  CornerSet cs;
  cs.board = {5, 7};
  for (const auto& p : xy) cs.corners.push_back({p[0], p[1]});
  const Pixel c = checkerboard_center(cs);
  EXPECT_NEAR(c.u, 483.668375, 1e-10);
  EXPECT_NEAR(c.v, 527.7022916666666, 1e-10);
}

TEST(Checkerboard, CountMismatch) {
  CornerSet cs;
  cs.board = {8, 6};
  cs.corners.assign(34, Pixel{1, 1});
  try {
    (void)checkerboard_center(cs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCountMismatch);
  }
}

TEST(Checkerboard, NonFiniteCorner) {
  CornerSet cs;
  cs.board = {2, 3};
  cs.corners = {{1, 1}, {std::nan(""), 2}};
  EXPECT_THROW((void)checkerboard_center(cs), Error);
}

TEST(Checkerboard, TranslationEquivariance) {
  CornerSet cs;
  cs.board = {4, 3};
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 3; ++i) cs.corners.push_back({10.0 * i + 0.3 * j, 7.0 * j});
  }
  const Pixel a = checkerboard_center(cs);
  for (Pixel& p : cs.corners) {
    p.u += 12.5;
    p.v -= 3.25;
  }
  const Pixel b = checkerboard_center(cs);
  EXPECT_NEAR(b.u - a.u, 12.5, 1e-12);
  EXPECT_NEAR(b.v - a.v, -3.25, 1e-12);
}

TEST(Checkerboard, WithinImage) {
  CornerSet cs;
  cs.board = {2, 2};
  cs.corners = {{0.0, 480.0}};
  EXPECT_TRUE(cs.within_image(640, 480));
  cs.corners = {{640.5, 10.0}};
  EXPECT_FALSE(cs.within_image(640, 480));
}

TEST(Checkerboard, SingletonAndSymmetricGrid) {
  CornerSet one;
  one.board = {2, 2};
  one.corners = {{5, 7}};
  EXPECT_EQ(checkerboard_center(one).u, 5.0);
  EXPECT_EQ(checkerboard_center(one).v, 7.0);
  CornerSet grid;
  grid.board = {4, 4};
  for (int j = -1; j <= 1; ++j) {
    for (int i = -1; i <= 1; ++i) grid.corners.push_back({100.0 + 12.5 * i, 200.0 + 9.0 * j});
  }
  EXPECT_DOUBLE_EQ(checkerboard_center(grid).u, 100.0);
  EXPECT_DOUBLE_EQ(checkerboard_center(grid).v, 200.0);
}
