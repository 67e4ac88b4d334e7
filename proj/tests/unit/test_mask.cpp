#include <gtest/gtest.h>

#include "radcal/error.hpp"
#include "radcal/mask.hpp"
#include "radcal/rng.hpp"

using namespace radcal;

TEST(Mask, ContainsUsesRowMajorRuns) {
  const BinaryMask m(4, 3, {{1, 2}, {6, 3}});  // (1,0) (2,0) ; (2,1) (3,1) (0,2)
  EXPECT_FALSE(m.contains(0, 0));
  EXPECT_TRUE(m.contains(1, 0));
  EXPECT_TRUE(m.contains(2, 0));
  EXPECT_FALSE(m.contains(3, 0));
  EXPECT_TRUE(m.contains(2, 1));
  EXPECT_TRUE(m.contains(3, 1));
  EXPECT_TRUE(m.contains(0, 2));
  EXPECT_FALSE(m.contains(1, 2));
  EXPECT_FALSE(m.contains(-1, 0));
  EXPECT_FALSE(m.contains(4, 0));
  EXPECT_FALSE(m.contains(0, 3));
  EXPECT_EQ(m.area(), 5u);
}

TEST(Mask, InvalidRuns) {
  EXPECT_THROW(BinaryMask(4, 3, {{0, 0}}), Error);           // empty run
  EXPECT_THROW(BinaryMask(4, 3, {{3, 2}, {4, 1}}), Error);   // overlap
  EXPECT_THROW(BinaryMask(4, 3, {{5, 1}, {2, 1}}), Error);   // unsorted
  EXPECT_THROW(BinaryMask(4, 3, {{10, 3}}), Error);          // past W*H
  EXPECT_NO_THROW(BinaryMask(4, 3, {{10, 2}}));              // ends exactly at W*H
  EXPECT_NO_THROW(BinaryMask(4, 3, {{0, 2}, {2, 1}}));       // adjacent runs are allowed
  EXPECT_THROW(BinaryMask(0, 3, {}), Error);
  const std::vector<std::uint64_t> odd{1, 2, 3};
  EXPECT_THROW((void)unflatten_runs(odd), Error);
}

TEST(Mask, DenseRoundTripProperty) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = rng.uniform_int(1, 40);
    const int h = rng.uniform_int(1, 30);
    const double density = rng.uniform();
    std::vector<std::uint8_t> dense(static_cast<std::size_t>(w * h));
    for (auto& px : dense) px = rng.uniform() < density ? 1 : 0;
    const BinaryMask m = BinaryMask::from_dense(w, h, dense);
    EXPECT_EQ(m.to_dense(), dense);
    const auto flat = flatten_runs(m.runs());
    EXPECT_EQ(BinaryMask(w, h, unflatten_runs(flat)), m);
    std::uint64_t ones = 0;
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        EXPECT_EQ(m.contains(c, r), dense[static_cast<std::size_t>(r * w + c)] == 1);
        ones += dense[static_cast<std::size_t>(r * w + c)];
      }
    }
    EXPECT_EQ(m.area(), ones);
    // maximal runs: consecutive runs never touch
    for (std::size_t i = 1; i < m.runs().size(); ++i) {
      EXPECT_LT(m.runs()[i - 1].start + m.runs()[i - 1].length, m.runs()[i].start);
    }
  }
}
