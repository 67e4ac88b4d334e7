#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "radcal/cli.hpp"
#include "radcal/io.hpp"

using namespace radcal;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "radcal");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("radcal_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string p(const std::string& rel) const { return (dir_ / rel).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CalibrationRoundTrip) {
  ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "12", "-o", p("scene")}).code, kExitOk);
  const CliRun r = run({"calibrate", "--corners", p("scene/corners"), "--radar", p("scene/radar"), "--intrinsics",
                     p("scene/intrinsics.json"), "-o", p("cal.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("12 poses"), std::string::npos);
  const CalibrationFile cal = calibration_file_from_json(read_json(p("cal.json")));
  EXPECT_TRUE(cal.converged);
  EXPECT_LT(cal.mre, 1e-6);
  EXPECT_EQ(cal.per_pose.size(), 12u);
}

TEST_F(CliTest, HoldoutSplit) {
  ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "10", "--pixel-sigma", "1", "-o", p("s")}).code, 0);
  const CliRun r = run({"calibrate", "--corners", p("s/corners"), "--radar", p("s/radar"), "--intrinsics",
                     p("s/intrinsics.json"), "--holdout", "0.2", "-o", p("cal.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const CalibrationFile cal = calibration_file_from_json(read_json(p("cal.json")));
  ASSERT_TRUE(cal.holdout);
  EXPECT_EQ(cal.holdout->test_pose_ids, (std::vector<int>{2, 7}));
  EXPECT_EQ(cal.holdout->train_pose_ids.size(), 8u);
  EXPECT_EQ(cal.per_pose.size(), 8u);
  EXPECT_GT(cal.holdout->test_mre, 0.0);
}

TEST_F(CliTest, LabelingPipelineAndEval) {
  ASSERT_EQ(run({"synth", "--kind", "labeling", "--frames", "2", "--fp-rate", "0.2", "--fn-rate", "0.2", "-o",
                 p("lab")}).code,
            kExitOk);
  for (const char* stage : {"coarse", "full"}) {
    const std::string out = p(std::string("pred_") + stage);
    const CliRun a = run({"autolabel", "--frames", p("lab/frames"), "--masks", p("lab/masks"), "--calibration",
                       p("lab/calibration.json"), "--stage", stage, "-o", out});
    ASSERT_EQ(a.code, kExitOk) << a.err;
    const CliRun e = run({"eval", "--pred", out, "--gt", p("lab/gt"), "-o", p(std::string("report_") + stage + ".json")});
    ASSERT_EQ(e.code, kExitOk) << e.err;
    EXPECT_NE(e.out.find("overall"), std::string::npos);
    EXPECT_TRUE(fs::exists(p(std::string("report_") + stage + ".txt")));
  }
  const double pa_coarse = read_json(p("report_coarse.json"))["summary"]["pa_pct"].get<double>();
  const double pa_full = read_json(p("report_full.json"))["summary"]["pa_pct"].get<double>();
  EXPECT_LT(pa_coarse, pa_full);

  const CliRun o = run({"eval", "--pred", p("pred_full"), "--gt", p("lab/gt"), "--frames", p("lab/frames"),
                     "--calibration", p("lab/calibration.json"), "-o", p("ov/report.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(fs::exists(p("ov/report_overlay/frame_0000.json")));
}

TEST_F(CliTest, DeterministicOutputs) {
  for (const char* d : {"a", "b"}) {
    ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "8", "--pixel-sigma", "0.5", "-o", p(d)}).code, 0);
    ASSERT_EQ(run({"calibrate", "--corners", p(std::string(d) + "/corners"), "--radar", p(std::string(d) + "/radar"),
                   "--intrinsics", p(std::string(d) + "/intrinsics.json"), "--jobs", d[0] == 'a' ? "1" : "4", "-o",
                   p(std::string(d) + ".json")})
                  .code,
              0);
  }
  EXPECT_EQ(read_text(p("a.json")), read_text(p("b.json")));
  EXPECT_EQ(read_text(p("a/radar/pose_0003.json")), read_text(p("b/radar/pose_0003.json")));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"calibrate"}).code, kExitConfig);
  EXPECT_EQ(run({"synth", "--kind", "nope", "-o", p("x")}).code, kExitConfig);
  EXPECT_EQ(run({"calibrate", "--corners", p("missing"), "--radar", p("missing"), "--intrinsics", p("k.json"), "-o",
                 p("c.json")})
                .code,
            kExitIo);

  ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "6", "-o", p("s")}).code, 0);
  write_text_atomic(p("params.toml"), "[solver]\nmax_iteratons = 3\n");
  EXPECT_EQ(run({"calibrate", "--corners", p("s/corners"), "--radar", p("s/radar"), "--intrinsics",
                 p("s/intrinsics.json"), "--params", p("params.toml"), "-o", p("c.json")})
                .code,
            kExitConfig);

  write_text_atomic(p("s/intrinsics.json"), "{\"fx\": 1");
  EXPECT_EQ(run({"calibrate", "--corners", p("s/corners"), "--radar", p("s/radar"), "--intrinsics",
                 p("s/intrinsics.json"), "-o", p("c.json")})
                .code,
            kExitInvalidInput);

  // two poses left: too few to calibrate
  ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "2", "-o", p("t")}).code, 0);
  const CliRun few = run({"calibrate", "--corners", p("t/corners"), "--radar", p("t/radar"), "--intrinsics",
                       p("t/intrinsics.json"), "-o", p("c2.json")});
  EXPECT_EQ(few.code, kExitInvalidInput);
  EXPECT_NE(few.err.find("TooFewPoses"), std::string::npos);
}

TEST_F(CliTest, NotConvergedStillWritesResult) {
  ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "8", "--pixel-sigma", "1", "-o", p("s")}).code, 0);
  write_text_atomic(p("params.json"), R"({"solver": {"max_iterations": 1, "multistart": false}})");
  const CliRun r = run({"calibrate", "--corners", p("s/corners"), "--radar", p("s/radar"), "--intrinsics",
                     p("s/intrinsics.json"), "--params", p("params.json"), "-o", p("c.json")});
  EXPECT_EQ(r.code, kExitNotConverged);
  EXPECT_TRUE(fs::exists(p("c.json")));
}

TEST_F(CliTest, SynthFileContracts) {
  ASSERT_EQ(run({"synth", "--kind", "calibration", "--poses", "24", "--seed", "7", "-o", p("c")}).code, kExitOk);
  const std::string_view json[] = {".json"};
  const std::string_view any[] = {".json", ".jsonl"};
  EXPECT_EQ(list_files(p("c/corners"), json).size(), 24u);
  EXPECT_EQ(list_files(p("c/radar"), json).size(), 24u);
  EXPECT_TRUE(fs::exists(p("c/ground_truth.json")));

  ASSERT_EQ(run({"synth", "--kind", "labeling", "--objects", "5", "--seed", "1", "-o", p("l")}).code, kExitOk);
  EXPECT_EQ(list_files(p("l/frames"), json).size(), 1u);
  EXPECT_EQ(list_files(p("l/masks"), json).size(), 1u);
  EXPECT_EQ(list_files(p("l/gt"), any).size(), 1u);
  EXPECT_EQ(mask_file_from_json(read_json(p("l/masks/frame_0000.json"))).instances.size(), 5u);
}

TEST_F(CliTest, HoldoutQuarterReportsBothErrors) {
  ASSERT_EQ(run({"synth", "--kind", "calibration", "--pixel-sigma", "1", "-o", p("s")}).code, 0);
  const CliRun r = run({"calibrate", "--corners", p("s/corners"), "--radar", p("s/radar"), "--intrinsics",
                        p("s/intrinsics.json"), "--holdout", "0.25", "-o", p("cal.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("train"), std::string::npos);
  EXPECT_NE(r.out.find("held-out"), std::string::npos);
  const CalibrationFile cal = calibration_file_from_json(read_json(p("cal.json")));
  EXPECT_EQ(cal.holdout->test_pose_ids.size(), 6u);
  EXPECT_EQ(cal.holdout->test_per_pose.size(), 6u);
}

TEST_F(CliTest, LabelingErrorsAndPerfectEval) {
  ASSERT_EQ(run({"synth", "--kind", "labeling", "-o", p("l")}).code, kExitOk);
  EXPECT_EQ(run({"autolabel", "--frames", p("l/frames"), "--masks", p("l/masks"), "--calibration", p("nope.json"),
                 "-o", p("pred")})
                .code,
            kExitIo);
  fs::create_directories(p("empty"));
  EXPECT_EQ(run({"eval", "--pred", p("empty"), "--gt", p("l/gt"), "-o", p("r.json")}).code, kExitIo);

  const CliRun e = run({"eval", "--pred", p("l/gt"), "--gt", p("l/gt"), "-o", p("r.json")});
  ASSERT_EQ(e.code, kExitOk) << e.err;
  const Json summary = read_json(p("r.json"))["summary"];
  EXPECT_EQ(summary["pa_pct"].get<double>(), 100.0);
  EXPECT_EQ(summary["miou_pct"].get<double>(), 100.0);

  const CliRun a = run({"autolabel", "--frames", p("l/frames"), "--masks", p("l/masks"), "--calibration",
                        p("l/calibration.json"), "-o", p("pred")});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(run({"eval", "--pred", p("pred"), "--gt", p("l/gt"), "-o", p("r2.json")}).code, kExitOk);
  EXPECT_EQ(read_json(p("r2.json"))["summary"]["pa_pct"].get<double>(), 100.0);
}
