#include "radcal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "radcal/error.hpp"
#include "radcal/io.hpp"
#include "radcal/parallel.hpp"
#include "radcal/params.hpp"
#include "radcal/synth.hpp"

namespace radcal {
namespace {

constexpr std::string_view kJson[] = {".json"};
constexpr std::string_view kJsonl[] = {".jsonl"};
constexpr std::string_view kFrameExts[] = {".json", ".jsonl"};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kFovInfeasible: return kExitConfig;
    case ErrorCode::kIo: return kExitIo;
    default: return kExitInvalidInput;
  }
}

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

Json extrinsics_json(const Extrinsics& T) {
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(T.rotation(r, c));
  }
  const Vec3 aa = rotation_to_axis_angle(T.rotation);
  return {{"rotation_row_major", rot},
          {"axis_angle", {aa.x(), aa.y(), aa.z()}},
          {"translation_m", {T.translation.x(), T.translation.y(), T.translation.z()}}};
}

std::string indexed_name(const char* prefix, int i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d%s", prefix, i, ext);
  return buf;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string kind{"calibration"};
  std::string config;
  std::string out;
  std::optional<int> poses, objects, frames;
  std::optional<std::uint64_t> seed;
  std::optional<double> fp_rate, fn_rate, pixel_sigma, radar_sigma;
};

void write_calibration_scene(const CalibrationScene& scene, const fs::path& out) {
  const SceneConfig& cfg = scene.config;
  Json gt_poses = Json::array();
  for (const CalibrationPose& p : scene.poses) {
    const std::string name = indexed_name("pose", p.pose_id, ".json");
    write_json(out / "corners" / name, to_json(CornerFile{p.pose_id, p.camera_time, p.corners}));
    RadarFrameFile rf;
    rf.timestamp = p.radar_time;
    rf.pose_id = p.pose_id;
    rf.spherical = p.frame.returns;
    write_json(out / "radar" / name, to_json(rf));
    gt_poses.push_back({{"pose_id", p.pose_id},
                        {"has_reflector", p.has_reflector},
                        {"center_radar_m", {p.true_center.x(), p.true_center.y(), p.true_center.z()}},
                        {"center_image_px", {p.true_image_center.u, p.true_image_center.v}},
                        {"camera_time_s", p.camera_time},
                        {"radar_time_s", p.radar_time}});
  }
  write_json(out / "intrinsics.json", to_json(cfg.intrinsics));
  write_json(out / "ground_truth.json", {{"kind", "calibration"},
                                         {"seed", cfg.seed},
                                         {"extrinsics", extrinsics_json(cfg.ground_truth)},
                                         {"intrinsics", to_json(cfg.intrinsics)},
                                         {"pixel_sigma_px", cfg.pixel_sigma},
                                         {"radar_position_sigma_m", cfg.radar_position_sigma},
                                         {"poses", gt_poses}});
}

void write_label_scene(const LabelScene& scene, const fs::path& out) {
  Json gt_frames = Json::array();
  for (std::size_t f = 0; f < scene.frames.size(); ++f) {
    const LabelFrame& frame = scene.frames[f];
    const int fi = static_cast<int>(f);
    RadarFrameFile rf;
    rf.timestamp = frame.timestamp;
    rf.cartesian = true;
    rf.points = frame.points;
    write_json(out / "frames" / indexed_name("frame", fi, ".json"), to_json(rf));
    write_json(out / "masks" / indexed_name("frame", fi, ".json"),
               to_json(MaskFile{scene.intrinsics.width, scene.intrinsics.height, frame.masks}));
    const auto records = make_label_records(frame.ground_truth);
    write_json_lines(out / "gt" / indexed_name("frame", fi, ".jsonl"), labels_to_json(records));
    Json roles = Json::array();
    for (PointRole r : frame.roles) roles.push_back(to_string(r));
    gt_frames.push_back({{"name", indexed_name("frame", fi, "")}, {"points", frame.points.size()}, {"roles", roles}});
  }
  CalibrationFile cal;
  cal.extrinsics = scene.extrinsics;
  cal.intrinsics = scene.intrinsics;
  cal.config = {{"source", "ground_truth"}};
  write_json(out / "calibration.json", to_json(cal));
  write_json(out / "intrinsics.json", to_json(scene.intrinsics));
  const LabelSceneConfig& cfg = scene.config;
  write_json(out / "ground_truth.json", {{"kind", "labeling"},
                                         {"seed", cfg.seed},
                                         {"fp_rate", cfg.fp_rate},
                                         {"fn_rate", cfg.fn_rate},
                                         {"extrinsics", extrinsics_json(scene.extrinsics)},
                                         {"intrinsics", to_json(scene.intrinsics)},
                                         {"frames", gt_frames}});
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthConfig cfg = a.config.empty() ? SynthConfig{} : synth_config_from_json(load_config_document(a.config));
  if (a.seed) cfg.calibration.seed = cfg.labeling.seed = *a.seed;
  const fs::path dir(a.out);
  if (a.kind == "calibration") {
    SceneConfig& s = cfg.calibration;
    if (a.poses) s.poses = *a.poses;
    if (a.pixel_sigma) s.pixel_sigma = *a.pixel_sigma;
    if (a.radar_sigma) s.radar_position_sigma = *a.radar_sigma;
    try {
      s.validate();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;
      throw Error(ErrorCode::kConfig, e.what());
    }
    const CalibrationScene scene = gen_calibration_scene(s);
    write_calibration_scene(scene, dir);
    const auto with_reflector = std::count_if(scene.poses.begin(), scene.poses.end(),
                                              [](const CalibrationPose& p) { return p.has_reflector; });
    out << "synth calibration: " << scene.poses.size() << " poses (" << with_reflector << " with reflector), seed "
        << s.seed << " -> " << dir.string() << "\n";
    return kExitOk;
  }
  LabelSceneConfig& l = cfg.labeling;
  if (a.objects) l.objects = *a.objects;
  if (a.frames) l.frames = *a.frames;
  if (a.fp_rate) l.fp_rate = *a.fp_rate;
  if (a.fn_rate) l.fn_rate = *a.fn_rate;
  try {
    l.validate();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    throw Error(ErrorCode::kConfig, e.what());
  }
  const LabelScene scene = gen_label_scene(l, cfg.calibration.intrinsics, cfg.calibration.ground_truth);
  write_label_scene(scene, dir);
  std::size_t points = 0;
  for (const LabelFrame& f : scene.frames) points += f.points.size();
  out << "synth labeling: " << scene.frames.size() << " frames, " << l.objects << " objects/frame, " << points
      << " points, seed " << l.seed << " -> " << dir.string() << "\n";
  return kExitOk;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateArgs {
  std::string corners, radar, intrinsics, params, out;
  double holdout{0.0};
  unsigned jobs{0};
};

std::optional<int> trailing_integer(const fs::path& p) {
  static const std::regex re("(\\d+)$");
  std::smatch m;
  const std::string stem = p.stem().string();
  if (!std::regex_search(stem, m, re)) return std::nullopt;
  return std::stoi(m[1].str());
}

/// Evenly spaced held-out positions over the pose-sorted pairs.
std::vector<std::size_t> holdout_positions(std::size_t n, double fraction) {
  const auto n_test = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < n_test; ++k) {
    idx.push_back(static_cast<std::size_t>(std::floor((static_cast<double>(k) + 0.5) * static_cast<double>(n) /
                                                      static_cast<double>(n_test))));
  }
  return idx;
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  const PipelineParams params = a.params.empty() ? PipelineParams{} : load_params(a.params);
  const CameraIntrinsics K = intrinsics_from_json(read_json(a.intrinsics));

  std::vector<CameraObservation> cams;
  for (const fs::path& p : list_files(a.corners, kJson)) {
    const CornerFile cf = corner_file_from_json(read_json(p));
    try {
      cams.push_back({cf.pose_id, cf.timestamp, checkerboard_center(cf.corners)});
    } catch (const Error& e) {
      spdlog::warn("skipping corners of pose {}: {}", cf.pose_id, e.what());
    }
  }

  struct Frame {
    int pose_id;
    RadarFrame frame;
  };
  std::vector<Frame> frames;
  for (const fs::path& p : list_files(a.radar, kFrameExts)) {
    for (const RadarFrameFile& rf : read_radar_frames(p)) {
      std::optional<int> id = rf.pose_id;
      if (!id && p.extension() == ".json") id = trailing_integer(p);
      if (!id) throw Error(ErrorCode::kParse, p.string() + ": radar frame has no pose_id");
      frames.push_back({*id, rf.to_frame()});
    }
  }
  std::vector<ReflectorDetection> detections(frames.size());
  parallel_for(frames.size(), a.jobs,
               [&](std::size_t i) { detections[i] = extract_reflector(frames[i].frame, params.filter, params.cluster); });
  std::vector<RadarObservation> radars;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!detections[i].found()) {
      spdlog::info("no reflector in radar frame of pose {}", frames[i].pose_id);
      continue;
    }
    radars.push_back({frames[i].pose_id, frames[i].frame.timestamp, detections[i].center});
  }

  const CorrespondenceSet all = build_correspondences(cams, radars, params.sync_tolerance);
  if (!(a.holdout >= 0.0 && a.holdout < 1.0)) throw Error(ErrorCode::kConfig, "--holdout must lie in [0, 1)");
  CorrespondenceSet train;
  std::vector<Correspondence> test;
  const std::vector<std::size_t> held = holdout_positions(all.size(), a.holdout);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (std::find(held.begin(), held.end(), i) != held.end()) {
      test.push_back(all.pairs[i]);
    } else {
      train.pairs.push_back(all.pairs[i]);
    }
  }
  if (train.size() < kMinPoses) {
    throw Error(ErrorCode::kTooFewPoses, std::to_string(train.size()) + " training poses after the holdout split");
  }

  const CalibrationResult res = solve_extrinsics(train, K, params.solver);
  CalibrationFile cal;
  cal.extrinsics = res.extrinsics;
  cal.intrinsics = K;
  cal.mre = res.mre;
  cal.rmse = res.rmse;
  cal.per_pose = res.per_pose;
  cal.converged = res.converged;
  cal.iterations = res.iterations;
  cal.config = to_json(params);
  cal.config["holdout_fraction"] = a.holdout;

  if (!test.empty()) {
    HoldoutReport h;
    for (const Correspondence& c : train.pairs) h.train_pose_ids.push_back(c.pose_id);
    for (const Correspondence& c : test) h.test_pose_ids.push_back(c.pose_id);
    h.train_mre = res.mre;
    h.train_rmse = res.rmse;
    h.test_per_pose = evaluate_residuals(test, K, res.extrinsics, params.solver.behind_camera_penalty);
    std::vector<Residual> r;
    for (const PoseResidual& p : h.test_per_pose) r.push_back(p.residual);
    h.test_mre = mre(r);
    h.test_rmse = rmse(r);
    cal.holdout = h;
  }
  write_json(a.out, to_json(cal));

  out << "calibrate: " << train.size() << " poses, MRE " << fmt("%.6g", res.mre) << " px, RMSE "
      << fmt("%.6g", res.rmse) << " px, " << (res.converged ? "converged" : "NOT converged") << "\n";
  if (cal.holdout) {
    out << "train: MRE " << fmt("%.6g", cal.holdout->train_mre) << " px, RMSE " << fmt("%.6g", cal.holdout->train_rmse)
        << " px (" << train.size() << " poses)\n";
    out << "held-out: MRE " << fmt("%.6g", cal.holdout->test_mre) << " px, RMSE "
        << fmt("%.6g", cal.holdout->test_rmse) << " px (" << test.size() << " poses)\n";
  }
  return res.converged ? kExitOk : kExitNotConverged;
}

// ---- autolabel -------------------------------------------------------------

struct AutolabelArgs {
  std::string frames, masks, calibration, params, out;
  std::string stage{"full"};
  unsigned jobs{0};
};

LabelStage parse_stage(const std::string& s) {
  if (s == "coarse") return LabelStage::kCoarse;
  if (s == "otpf") return LabelStage::kOtpf;
  if (s == "full") return LabelStage::kFull;
  throw Error(ErrorCode::kConfig, "--stage must be coarse, otpf or full");
}

int cmd_autolabel(const AutolabelArgs& a, std::ostream& out) {
  const LabelStage stage = parse_stage(a.stage);
  const PipelineParams params = a.params.empty() ? PipelineParams{} : load_params(a.params);
  const CalibrationFile cal = calibration_file_from_json(read_json(a.calibration));
  const std::vector<fs::path> frame_files = list_files(a.frames, kJson);
  for (const fs::path& p : frame_files) {
    const fs::path m = fs::path(a.masks) / p.filename();
    if (!fs::exists(m)) throw Error(ErrorCode::kIo, "no mask file for frame " + p.filename().string());
  }

  std::vector<std::size_t> labeled(frame_files.size(), 0), totals(frame_files.size(), 0);
  parallel_for(frame_files.size(), a.jobs, [&](std::size_t i) {
    const fs::path& p = frame_files[i];
    const std::vector<RadarPoint> points = radar_frame_from_json(read_json(p)).to_points();
    const MaskFile masks = mask_file_from_json(read_json(fs::path(a.masks) / p.filename()));
    const FrameLabels labels = autolabel_frame(points, masks.instances, cal.intrinsics, cal.extrinsics, params.label, stage);
    const auto records = make_label_records(labels);
    write_json_lines(fs::path(a.out) / (p.stem().string() + ".jsonl"), labels_to_json(records));
    totals[i] = points.size();
    labeled[i] = static_cast<std::size_t>(
        std::count_if(labels.labels.begin(), labels.labels.end(), [](const auto& l) { return l.has_value(); }));
  });
  std::size_t n_points = 0, n_labeled = 0;
  for (std::size_t i = 0; i < frame_files.size(); ++i) {
    n_points += totals[i];
    n_labeled += labeled[i];
  }
  out << "autolabel (" << to_string(stage) << "): " << frame_files.size() << " frames, " << n_points << " points, "
      << n_labeled << " labeled -> " << a.out << "\n";
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string pred, gt, out, frames, calibration;
};

Json label_pair(const InstanceLabel& l) { return {{"class_id", l.class_id}, {"instance_id", l.instance_id}}; }

Json overlay_json(const std::vector<RadarPoint>& points, const CalibrationFile& cal,
                  std::span<const std::optional<InstanceLabel>> pred, std::span<const std::optional<InstanceLabel>> gt) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto px = project(cal.intrinsics, cal.extrinsics, points[i].position);
    Json e = {{"point_index", i},
              {"u_px", px ? Json(px->u) : Json(nullptr)},
              {"v_px", px ? Json(px->v) : Json(nullptr)},
              {"pred", pred[i] ? label_pair(*pred[i]) : Json(nullptr)},
              {"gt", gt[i] ? label_pair(*gt[i]) : Json(nullptr)}};
    pts.push_back(std::move(e));
  }
  return {{"points", pts}};
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const std::vector<fs::path> pred_files = list_files(a.pred, kJsonl);
  if (pred_files.empty()) throw Error(ErrorCode::kIo, "no prediction files in " + a.pred);
  std::optional<CalibrationFile> cal;
  if (!a.frames.empty() != !a.calibration.empty()) {
    throw Error(ErrorCode::kConfig, "--frames and --calibration must be given together");
  }
  if (!a.calibration.empty()) cal = calibration_file_from_json(read_json(a.calibration));

  const fs::path report_path(a.out);
  fs::path overlay_dir = report_path;
  overlay_dir.replace_filename(report_path.stem().string() + "_overlay");

  Json frames = Json::array();
  PointAccuracy total;
  double iou_sum = 0.0;
  std::size_t matched = 0;
  std::string table = "frame                 points   PA(all)    PA(fg)      mIoU  matched\n";
  auto row = [](const std::string& name, std::size_t points, double pa, double pa_fg, double miou_pct,
                std::size_t n) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-20s %7zu %9.2f %9.2f %9.2f %8zu\n", name.c_str(), points, pa, pa_fg, miou_pct, n);
    return std::string(buf);
  };

  for (const fs::path& p : pred_files) {
    const fs::path g = fs::path(a.gt) / p.filename();
    if (!fs::exists(g)) throw Error(ErrorCode::kIo, "no ground truth for " + p.filename().string());
    const auto pred_lines = read_json_lines(p);
    const auto gt_lines = read_json_lines(g);
    const auto pred = label_column(labels_from_json(pred_lines));
    const auto gt = label_column(labels_from_json(gt_lines));
    const LabelMetrics m = evaluate_labels(pred, gt);

    total.correct += m.accuracy.correct;
    total.total += m.accuracy.total;
    total.foreground_correct += m.accuracy.foreground_correct;
    total.foreground_total += m.accuracy.foreground_total;
    for (const InstanceMatch& im : m.matching.pairs) iou_sum += im.iou;
    matched += m.matching.pairs.size();

    Json pairs = Json::array();
    for (const InstanceMatch& im : m.matching.pairs) {
      pairs.push_back({{"pred", label_pair(im.pred)},
                       {"gt", label_pair(im.gt)},
                       {"intersection", im.intersection},
                       {"union", im.union_size},
                       {"iou_pct", 100.0 * im.iou}});
    }
    const std::string name = p.stem().string();
    frames.push_back({{"name", name},
                      {"points", m.accuracy.total},
                      {"pa_pct", m.accuracy.all_points()},
                      {"pa_foreground_pct", m.accuracy.foreground()},
                      {"miou_pct", m.miou},
                      {"matches", pairs},
                      {"unmatched_pred", m.matching.unmatched_pred.size()},
                      {"unmatched_gt", m.matching.unmatched_gt.size()}});
    table += row(name, m.accuracy.total, m.accuracy.all_points(), m.accuracy.foreground(), m.miou,
                 m.matching.pairs.size());

    if (cal) {
      const fs::path frame_file = fs::path(a.frames) / (name + ".json");
      const std::vector<RadarPoint> points = radar_frame_from_json(read_json(frame_file)).to_points();
      if (points.size() != pred.size()) {
        throw Error(ErrorCode::kLengthMismatch, name + ": frame has " + std::to_string(points.size()) +
                                                    " points, labels cover " + std::to_string(pred.size()));
      }
      write_json(overlay_dir / (name + ".json"), overlay_json(points, *cal, pred, gt));
    }
  }

  const double miou_all = matched ? 100.0 * iou_sum / static_cast<double>(matched) : 0.0;
  table += row("overall", total.total, total.all_points(), total.foreground(), miou_all, matched);
  Json summary = {{"frames", pred_files.size()},
                  {"points", total.total},
                  {"pa_pct", total.all_points()},
                  {"pa_foreground_pct", total.foreground()},
                  {"miou_pct", miou_all},
                  {"matches", matched}};
  if (cal) {
    summary["calibration_mre_px"] = cal->mre;
    summary["calibration_rmse_px"] = cal->rmse;
  }
  write_json(report_path, {{"frames", frames}, {"summary", summary}});
  fs::path table_path = report_path;
  table_path.replace_extension(".txt");
  write_text_atomic(table_path, table);
  out << table;
  return kExitOk;
}

}  // namespace

void configure_logging_from_env() {
  const char* env = std::getenv("RADCAL_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radar-camera extrinsic calibration and radar point auto-labeling"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scene with ground truth");
  synth->add_option("--kind", sa.kind, "calibration or labeling")->check(CLI::IsMember({"calibration", "labeling"}));
  synth->add_option("--config", sa.config, "Scene config (TOML or JSON)");
  synth->add_option("--poses", sa.poses, "Calibration poses");
  synth->add_option("--objects", sa.objects, "Objects per labeling frame");
  synth->add_option("--frames", sa.frames, "Labeling frames");
  synth->add_option("--seed", sa.seed, "Random seed");
  synth->add_option("--fp-rate", sa.fp_rate, "Wrong-depth bait per object point");
  synth->add_option("--fn-rate", sa.fn_rate, "Mask-hole points per object point");
  synth->add_option("--pixel-sigma", sa.pixel_sigma, "Corner noise (px)");
  synth->add_option("--radar-sigma", sa.radar_sigma, "Reflector position noise (m)");
  synth->add_option("-o,--out", sa.out, "Output directory")->required();

  CalibrateArgs ca;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate radar-to-camera extrinsics");
  calibrate->add_option("--corners", ca.corners, "Directory of corner files")->required();
  calibrate->add_option("--radar", ca.radar, "Directory of radar frames")->required();
  calibrate->add_option("--intrinsics", ca.intrinsics, "Camera intrinsics JSON")->required();
  calibrate->add_option("--params", ca.params, "Parameter file (TOML or JSON)");
  calibrate->add_option("--holdout", ca.holdout, "Fraction of poses held out for evaluation");
  calibrate->add_option("--jobs", ca.jobs, "Worker threads (0 = all cores)");
  calibrate->add_option("-o,--out", ca.out, "Calibration output file")->required();

  AutolabelArgs aa;
  auto* autolabel = app.add_subcommand("autolabel", "Label radar points from instance masks");
  autolabel->add_option("--frames", aa.frames, "Directory of radar frames")->required();
  autolabel->add_option("--masks", aa.masks, "Directory of mask files (same names as frames)")->required();
  autolabel->add_option("--calibration", aa.calibration, "Calibration file")->required();
  autolabel->add_option("--params", aa.params, "Parameter file (TOML or JSON)");
  autolabel->add_option("--stage", aa.stage, "coarse, otpf or full");
  autolabel->add_option("--jobs", aa.jobs, "Worker threads (0 = all cores)");
  autolabel->add_option("-o,--out", aa.out, "Output directory for label files")->required();

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Score predicted labels against ground truth");
  eval->add_option("--pred", ea.pred, "Directory of predicted label files")->required();
  eval->add_option("--gt", ea.gt, "Directory of ground-truth label files")->required();
  eval->add_option("--frames", ea.frames, "Radar frames, for overlay output");
  eval->add_option("--calibration", ea.calibration, "Calibration, for overlay output");
  eval->add_option("-o,--out", ea.out, "Report JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (e.get_exit_code() == 0) return kExitOk;
    return kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(sa, out);
    if (*calibrate) return cmd_calibrate(ca, out);
    if (*autolabel) return cmd_autolabel(aa, out);
    return cmd_eval(ea, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace radcal
