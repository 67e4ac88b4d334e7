#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "radcal/error.hpp"
#include "radcal/metrics.hpp"
#include "radcal/rng.hpp"

using namespace radcal;

namespace {

using Labels = std::vector<std::optional<InstanceLabel>>;

std::optional<InstanceLabel> L(int cls, int inst) { return InstanceLabel{cls, inst}; }
constexpr std::nullopt_t N = std::nullopt;

}  // namespace

TEST(Reprojection, UnitTruths) {
  const std::vector<Residual> one{{3, 4}};
  EXPECT_DOUBLE_EQ(mre(one), 5.0);
  EXPECT_DOUBLE_EQ(rmse(one), 5.0);
  const std::vector<Residual> two{{0, 0}, {6, 8}};
  EXPECT_DOUBLE_EQ(mre(two), 5.0);
  EXPECT_DOUBLE_EQ(rmse(two), std::sqrt(50.0));
  EXPECT_THROW((void)mre(std::vector<Residual>{}), Error);
  EXPECT_THROW((void)rmse(std::vector<Residual>{}), Error);
}

TEST(Reprojection, FrozenTwentyFourResiduals) {
  // numpy oracle on these residuals
  const double d[24][2] = {{2.2422, 0.5814},   {3.3349, -0.6166}, {-2.7777, 1.7522}, {1.7476, -0.6445},
                           {-2.3484, 0.6875},  {-7.4817, 2.0704}, {1.4741, -4.9166}, {0.1841, -2.8923},
                           {2.2717, -6.1025},  {-2.7435, 2.1287}, {3.4692, -6.474},  {-1.4941, 0.9841},
                           {-1.8276, 4.7719},  {-3.5737, 1.0636}, {-3.1452, 4.2179}, {-0.065, -1.1168},
                           {-5.1546, 5.0455},  {2.2583, 2.2607},  {3.4136, 1.0477},  {-1.9177, -2.4007},
                           {-2.4006, 4.1102},  {-4.3811, -1.7891}, {-0.9637, 0.6739}, {1.726, -3.7473}};
  std::vector<Residual> r;
  for (const auto& x : d) r.push_back({x[0], x[1]});
  EXPECT_NEAR(mre(r), 3.969910326923337, 1e-12);
  EXPECT_NEAR(rmse(r), 4.380633098841612, 1e-12);
}

TEST(Reprojection, RmseDominatesMreProperty) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<Residual> r(static_cast<std::size_t>(rng.uniform_int(1, 30)));
    for (auto& x : r) x = {rng.normal(0, 5), rng.normal(0, 5)};
    EXPECT_GE(rmse(r), mre(r) - 1e-12);
  }
}

TEST(Matching, ThreeOfFourOverlap) {
  const Labels gt{L(1, 1), L(1, 1), L(1, 1), L(1, 1)};
  const Labels pred{L(1, 7), L(1, 7), L(1, 7), N};
  const MatchResult m = match_instances(pred, gt);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_DOUBLE_EQ(100.0 * m.pairs[0].iou, 75.0);
  EXPECT_EQ(m.pairs[0].intersection, 3u);
  EXPECT_EQ(m.pairs[0].union_size, 4u);
  EXPECT_DOUBLE_EQ(miou(pred, gt), 75.0);
}

TEST(Matching, ClassMustAgree) {
  const Labels gt{L(1, 1), L(1, 1)};
  const Labels pred{L(2, 1), L(2, 1)};
  const MatchResult m = match_instances(pred, gt);
  EXPECT_TRUE(m.pairs.empty());
  EXPECT_EQ(m.unmatched_pred.size(), 1u);
  EXPECT_EQ(m.unmatched_gt.size(), 1u);
  EXPECT_DOUBLE_EQ(miou(m), 0.0);
  EXPECT_DOUBLE_EQ(point_accuracy(pred, gt).all_points(), 0.0);
}

TEST(Matching, GreedyOneToOne) {
  // pred 5: gt 1 IoU 1/2, gt 2 IoU 1/3; pred 6: gt 1 IoU 1/3
  const Labels gt{L(1, 1), L(1, 1), L(1, 2), L(1, 1)};
  const Labels pred{L(1, 5), L(1, 5), L(1, 5), L(1, 6)};
  const MatchResult m = match_instances(pred, gt);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].pred.instance_id, 5);
  EXPECT_EQ(m.pairs[0].gt.instance_id, 1);
  EXPECT_EQ(m.unmatched_pred.size(), 1u);
  EXPECT_EQ(m.unmatched_gt.size(), 1u);
}

TEST(Matching, LengthMismatch) {
  const Labels a{L(1, 1)};
  const Labels b{L(1, 1), N};
  try {
    (void)match_instances(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
}

TEST(Accuracy, BackgroundAndRelabeling) {
  const Labels gt{L(1, 1), L(1, 1), N, N, L(2, 3)};
  const Labels pred{L(1, 9), L(1, 9), N, L(1, 9), L(2, 4)};
  const PointAccuracy pa = point_accuracy(pred, gt);
  EXPECT_EQ(pa.total, 5u);
  EXPECT_EQ(pa.correct, 4u);  // point 3 is a false positive
  EXPECT_DOUBLE_EQ(pa.all_points(), 80.0);
  EXPECT_EQ(pa.foreground_total, 3u);
  EXPECT_DOUBLE_EQ(pa.foreground(), 100.0);
}

TEST(Accuracy, IdentityGivesHundred) {
  const Labels gt{L(1, 1), N, L(2, 2), L(2, 2), N};
  const LabelMetrics m = evaluate_labels(gt, gt);
  EXPECT_DOUBLE_EQ(m.accuracy.all_points(), 100.0);
  EXPECT_DOUBLE_EQ(m.miou, 100.0);
}

TEST(Accuracy, FortySevenOfFifty) {
  Labels gt(50, N), pred(50, N);
  for (int i = 0; i < 30; ++i) gt[static_cast<std::size_t>(i)] = pred[static_cast<std::size_t>(i)] = L(1, 1 + i / 10);
  pred[40] = L(1, 1);
  pred[41] = L(1, 2);
  pred[0] = N;
  EXPECT_DOUBLE_EQ(point_accuracy(pred, gt).all_points(), 94.0);
}

TEST(Matching, GreedyWithinHalfOfOptimumProperty) {
  Rng rng(33);
  for (int t = 0; t < 300; ++t) {
    const int n = rng.uniform_int(1, 25);
    Labels gt(static_cast<std::size_t>(n)), pred(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.8) gt[static_cast<std::size_t>(i)] = L(rng.uniform_int(1, 2), rng.uniform_int(1, 4));
      if (rng.uniform() < 0.8) pred[static_cast<std::size_t>(i)] = L(rng.uniform_int(1, 2), rng.uniform_int(1, 4));
    }
    const MatchResult m = match_instances(pred, gt);
    double total = 0.0;
    for (const auto& p : m.pairs) total += p.iou;
    const double best = oracle::best_total_iou(pred, gt);
    EXPECT_GE(total, 0.5 * best - 1e-12);
    EXPECT_LE(total, best + 1e-12);
    EXPECT_EQ(match_instances(pred, gt).pairs.size(), m.pairs.size());  // deterministic
  }
}

TEST(Reprojection, ZeroResiduals) {
  const std::vector<Residual> z{{0, 0}, {0, 0}};
  EXPECT_EQ(mre(z), 0.0);
  EXPECT_EQ(rmse(z), 0.0);
}

TEST(Accuracy, EightOfTen) {
  Labels gt(10, L(1, 1)), pred(10, L(1, 1));
  pred[8] = N;
  pred[9] = N;
  EXPECT_DOUBLE_EQ(point_accuracy(pred, gt).all_points(), 80.0);
  EXPECT_DOUBLE_EQ(point_accuracy(gt, gt).all_points(), 100.0);
}

TEST(Matching, IdenticalPartitions) {
  const Labels gt{L(1, 1), L(1, 1), L(2, 2), N, L(1, 3)};
  const MatchResult m = match_instances(gt, gt);
  EXPECT_EQ(m.pairs.size(), 3u);
  for (const auto& p : m.pairs) EXPECT_EQ(p.iou, 1.0);
  EXPECT_TRUE(m.unmatched_pred.empty());
}

TEST(Matching, SplitInstanceMatchesLargerHalf) {
  const Labels gt(5, L(1, 1));
  const Labels pred{L(1, 4), L(1, 4), L(1, 4), L(1, 5), L(1, 5)};
  const MatchResult m = match_instances(pred, gt);
  ASSERT_EQ(m.pairs.size(), 1u);
  EXPECT_EQ(m.pairs[0].pred.instance_id, 4);
  EXPECT_DOUBLE_EQ(m.pairs[0].iou, 0.6);
  ASSERT_EQ(m.unmatched_pred.size(), 1u);
  EXPECT_EQ(m.unmatched_pred[0].instance_id, 5);
}

TEST(Matching, HandEnumeratedMultiInstance) {
  // gt: A={0,1,2,3} B={4,5,6} C(class 2)={7,8}
  // pred: a={0,1,2,9} b={4,5} c(class 2)={7,8,3}
  const Labels gt{L(1, 1), L(1, 1), L(1, 1), L(1, 1), L(1, 2), L(1, 2), L(1, 2), L(2, 3), L(2, 3), N};
  const Labels pred{L(1, 7), L(1, 7), L(1, 7), L(2, 9), L(1, 8), L(1, 8), N, L(2, 9), L(2, 9), L(1, 7)};
  const MatchResult m = match_instances(pred, gt);
  ASSERT_EQ(m.pairs.size(), 3u);
  // IoUs: a-A 3/5, b-B 2/3, c-C 2/3
  double sum = 0.0;
  for (const auto& p : m.pairs) sum += p.iou;
  EXPECT_NEAR(sum, 3.0 / 5.0 + 2.0 / 3.0 + 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(miou(m), 100.0 * (3.0 / 5.0 + 4.0 / 3.0) / 3.0, 1e-12);
  EXPECT_EQ(point_accuracy(pred, gt, m).correct, 7u);  // 0,1,2,4,5,7,8
}

TEST(Matching, EmptyMeansZeroMiou) {
  const Labels none(4, N);
  EXPECT_EQ(miou(none, none), 0.0);
  EXPECT_EQ(point_accuracy(none, none).all_points(), 100.0);
}
