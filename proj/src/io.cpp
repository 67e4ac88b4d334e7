#include "radcal/io.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "radcal/error.hpp"

namespace radcal {
namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::kParse, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) parse_fail(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) parse_fail(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) parse_fail(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

template <std::size_t N>
std::array<double, N> numbers(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != N) {
    parse_fail(std::string("field '") + key + "' must hold " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) parse_fail(std::string("field '") + key + "' must hold numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

Json pose_residual_json(const PoseResidual& p) {
  return {{"pose_id", p.pose_id},
          {"du_px", p.residual.du},
          {"dv_px", p.residual.dv},
          {"error_px", std::sqrt(p.residual.squared_norm())},
          {"behind_camera", p.behind_camera}};
}

PoseResidual pose_residual_from(const Json& j) {
  PoseResidual p;
  p.pose_id = integer(j, "pose_id");
  p.residual = {number(j, "du_px"), number(j, "dv_px")};
  p.behind_camera = j.value("behind_camera", false);
  return p;
}

std::vector<PoseResidual> pose_residuals_from(const Json& arr) {
  if (!arr.is_array()) parse_fail("per_pose must be an array");
  std::vector<PoseResidual> out;
  for (const Json& e : arr) out.push_back(pose_residual_from(e));
  return out;
}

Json label_json(const std::optional<InstanceLabel>& l) { return l ? Json(l->class_id) : Json(nullptr); }

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  static std::atomic<unsigned> counter{0};
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot replace " + path.string());
  }
}

Json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

std::vector<Json> read_json_lines(const fs::path& path) {
  const std::string text = read_text(path);
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      parse_fail(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_json(const fs::path& path, const Json& j) { write_text_atomic(path, dump_canonical(j)); }

void write_json_lines(const fs::path& path, std::span<const Json> records) {
  std::string text;
  for (const Json& r : records) {
    text += dump_canonical_line(r);
    text += '\n';
  }
  write_text_atomic(path, text);
}

std::vector<fs::path> list_files(const fs::path& dir, std::span<const std::string_view> extensions) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

// ---- corners ----------------------------------------------------------------

Json to_json(const CornerFile& f) {
  Json corners = Json::array();
  for (const Pixel& p : f.corners.corners) corners.push_back({p.u, p.v});
  return {{"pose_id", f.pose_id},
          {"timestamp_s", f.timestamp},
          {"board", {{"squares_x", f.corners.board.squares_x}, {"squares_y", f.corners.board.squares_y}}},
          {"corners", corners}};
}

CornerFile corner_file_from_json(const Json& j) {
  CornerFile f;
  f.pose_id = integer(j, "pose_id");
  f.timestamp = number(j, "timestamp_s");
  const Json& board = field(j, "board");
  f.corners.board = {integer(board, "squares_x"), integer(board, "squares_y")};
  const Json& corners = field(j, "corners");
  if (!corners.is_array()) parse_fail("corners must be an array");
  for (const Json& c : corners) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      parse_fail("each corner must be [u, v]");
    }
    f.corners.corners.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return f;
}

// ---- radar frames -----------------------------------------------------------

RadarFrame RadarFrameFile::to_frame() const {
  RadarFrame frame;
  frame.timestamp = timestamp;
  if (!cartesian) {
    frame.returns = spherical;
  } else {
    for (const RadarPoint& p : points) frame.returns.push_back(cart2sph(p.position, p.radial_velocity, p.rcs));
  }
  return frame;
}

std::vector<RadarPoint> RadarFrameFile::to_points() const {
  if (cartesian) return points;
  std::vector<RadarPoint> out;
  out.reserve(spherical.size());
  for (const SphericalReturn& s : spherical) out.push_back({sph2cart(s), s.radial_velocity, s.rcs});
  return out;
}

Json to_json(const RadarFrameFile& f) {
  Json pts = Json::array();
  if (f.cartesian) {
    for (const RadarPoint& p : f.points) {
      pts.push_back({{"x_m", p.position.x()},
                     {"y_m", p.position.y()},
                     {"z_m", p.position.z()},
                     {"v_mps", p.radial_velocity},
                     {"rcs_dbsm", p.rcs}});
    }
  } else {
    for (const SphericalReturn& s : f.spherical) {
      pts.push_back({{"r_m", s.range},
                     {"az_rad", s.azimuth},
                     {"el_rad", s.elevation},
                     {"v_mps", s.radial_velocity},
                     {"rcs_dbsm", s.rcs}});
    }
  }
  Json j = {{"timestamp_s", f.timestamp}, {"points", pts}};
  if (f.pose_id) j["pose_id"] = *f.pose_id;
  return j;
}

RadarFrameFile radar_frame_from_json(const Json& j) {
  RadarFrameFile f;
  f.timestamp = number(j, "timestamp_s");
  if (j.contains("pose_id")) f.pose_id = integer(j, "pose_id");
  const Json& pts = field(j, "points");
  if (!pts.is_array()) parse_fail("points must be an array");
  static const std::set<std::string> kSpherical{"r_m", "az_rad", "el_rad", "v_mps", "rcs_dbsm"};
  static const std::set<std::string> kCartesian{"x_m", "y_m", "z_m", "v_mps", "rcs_dbsm"};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Json& p = pts[i];
    if (!p.is_object()) parse_fail("radar point " + std::to_string(i) + " is not an object");
    std::set<std::string> keys;
    for (auto it = p.begin(); it != p.end(); ++it) keys.insert(it.key());
    const bool cart = keys == kCartesian;
    if (!cart && keys != kSpherical) {
      parse_fail("radar point " + std::to_string(i) + " must have exactly {r_m, az_rad, el_rad, v_mps, rcs_dbsm} "
                 "or {x_m, y_m, z_m, v_mps, rcs_dbsm}");
    }
    if (i == 0) {
      f.cartesian = cart;
    } else if (cart != f.cartesian) {
      parse_fail("radar frame mixes spherical and Cartesian points");
    }
    if (cart) {
      f.points.push_back({Vec3(number(p, "x_m"), number(p, "y_m"), number(p, "z_m")), number(p, "v_mps"),
                          number(p, "rcs_dbsm")});
    } else {
      f.spherical.push_back(
          {number(p, "r_m"), number(p, "az_rad"), number(p, "el_rad"), number(p, "v_mps"), number(p, "rcs_dbsm")});
    }
  }
  return f;
}

std::vector<RadarFrameFile> read_radar_frames(const fs::path& path) {
  std::vector<RadarFrameFile> out;
  if (path.extension() == ".jsonl") {
    for (const Json& j : read_json_lines(path)) out.push_back(radar_frame_from_json(j));
  } else {
    out.push_back(radar_frame_from_json(read_json(path)));
  }
  return out;
}

// ---- intrinsics -------------------------------------------------------------

Json to_json(const CameraIntrinsics& K) {
  return {{"fx", K.fx}, {"fy", K.fy}, {"cx", K.cx}, {"cy", K.cy}, {"width", K.width}, {"height", K.height}};
}

CameraIntrinsics intrinsics_from_json(const Json& j) {
  CameraIntrinsics K;
  K.fx = number(j, "fx");
  K.fy = number(j, "fy");
  K.cx = number(j, "cx");
  K.cy = number(j, "cy");
  K.width = integer(j, "width");
  K.height = integer(j, "height");
  try {
    K.validate();
  } catch (const Error& e) {
    parse_fail(e.what());
  }
  return K;
}

// ---- masks ------------------------------------------------------------------

Json to_json(const MaskFile& f) {
  Json instances = Json::array();
  for (const InstanceMask& m : f.instances) {
    instances.push_back({{"instance_id", m.instance_id},
                         {"class_id", m.class_id},
                         {"confidence", m.confidence},
                         {"rle", flatten_runs(m.mask.runs())}});
  }
  return {{"width", f.width}, {"height", f.height}, {"instances", instances}};
}

MaskFile mask_file_from_json(const Json& j) {
  MaskFile f;
  f.width = integer(j, "width");
  f.height = integer(j, "height");
  if (f.width <= 0 || f.height <= 0) parse_fail("mask width and height must be positive");
  const Json& instances = field(j, "instances");
  if (!instances.is_array()) parse_fail("instances must be an array");
  for (const Json& inst : instances) {
    InstanceMask m;
    m.instance_id = integer(inst, "instance_id");
    m.class_id = integer(inst, "class_id");
    m.confidence = number(inst, "confidence");
    if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) parse_fail("confidence must lie in [0, 1]");
    const Json& rle = field(inst, "rle");
    if (!rle.is_array()) parse_fail("rle must be an array");
    std::vector<std::uint64_t> flat;
    for (const Json& v : rle) {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        parse_fail("rle entries must be non-negative integers");
      }
      flat.push_back(v.get<std::uint64_t>());
    }
    try {
      m.mask = BinaryMask(f.width, f.height, unflatten_runs(flat));
    } catch (const Error& e) {
      parse_fail("instance " + std::to_string(m.instance_id) + ": " + e.what());
    }
    f.instances.push_back(std::move(m));
  }
  return f;
}

// ---- calibration ------------------------------------------------------------

Json to_json(const CalibrationFile& f) {
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(f.extrinsics.rotation(r, c));
  }
  const Vec3 aa = rotation_to_axis_angle(f.extrinsics.rotation);
  Json per_pose = Json::array();
  for (const PoseResidual& p : f.per_pose) per_pose.push_back(pose_residual_json(p));
  Json j = {{"rotation_row_major", rot},
            {"axis_angle", {aa.x(), aa.y(), aa.z()}},
            {"translation_m", {f.extrinsics.translation.x(), f.extrinsics.translation.y(), f.extrinsics.translation.z()}},
            {"intrinsics", to_json(f.intrinsics)},
            {"mre_px", f.mre},
            {"rmse_px", f.rmse},
            {"per_pose", per_pose},
            {"converged", f.converged},
            {"iterations", f.iterations},
            {"config", f.config}};
  if (f.holdout) {
    Json test = Json::array();
    for (const PoseResidual& p : f.holdout->test_per_pose) test.push_back(pose_residual_json(p));
    j["holdout"] = {{"train_pose_ids", f.holdout->train_pose_ids}, {"test_pose_ids", f.holdout->test_pose_ids},
                    {"train_mre_px", f.holdout->train_mre},        {"train_rmse_px", f.holdout->train_rmse},
                    {"test_mre_px", f.holdout->test_mre},          {"test_rmse_px", f.holdout->test_rmse},
                    {"test_per_pose", test}};
  }
  return j;
}

CalibrationFile calibration_file_from_json(const Json& j) {
  CalibrationFile f;
  const auto rot = numbers<9>(j, "rotation_row_major");
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) f.extrinsics.rotation(r, c) = rot[static_cast<std::size_t>(3 * r + c)];
  }
  const auto t = numbers<3>(j, "translation_m");
  f.extrinsics.translation = Vec3(t[0], t[1], t[2]);
  if (!f.extrinsics.is_valid(kCalibrationLoadTolerance)) {
    parse_fail("calibration rotation is not orthonormal within 1e-6");
  }
  f.intrinsics = intrinsics_from_json(field(j, "intrinsics"));
  f.mre = number(j, "mre_px");
  f.rmse = number(j, "rmse_px");
  f.per_pose = pose_residuals_from(field(j, "per_pose"));
  f.converged = j.value("converged", true);
  f.iterations = j.value("iterations", 0);
  if (j.contains("config")) f.config = j.at("config");
  if (j.contains("holdout")) {
    const Json& h = j.at("holdout");
    HoldoutReport r;
    r.train_pose_ids = field(h, "train_pose_ids").get<std::vector<int>>();
    r.test_pose_ids = field(h, "test_pose_ids").get<std::vector<int>>();
    r.train_mre = number(h, "train_mre_px");
    r.train_rmse = number(h, "train_rmse_px");
    r.test_mre = number(h, "test_mre_px");
    r.test_rmse = number(h, "test_rmse_px");
    r.test_per_pose = pose_residuals_from(field(h, "test_per_pose"));
    f.holdout = std::move(r);
  }
  return f;
}

// ---- labels -----------------------------------------------------------------

Provenance provenance_from_string(std::string_view s) {
  for (Provenance p : {Provenance::kCoarse, Provenance::kFilteredOut, Provenance::kRecovered, Provenance::kUnlabeled}) {
    if (s == to_string(p)) return p;
  }
  parse_fail("unknown provenance '" + std::string(s) + "'");
}

std::vector<Json> labels_to_json(std::span<const LabelRecord> records) {
  std::vector<Json> out;
  out.reserve(records.size());
  for (const LabelRecord& r : records) {
    out.push_back({{"point_index", r.point_index},
                   {"class_id", label_json(r.label)},
                   {"instance_id", r.label ? Json(r.label->instance_id) : Json(nullptr)},
                   {"provenance", to_string(r.provenance)}});
  }
  return out;
}

std::vector<LabelRecord> labels_from_json(std::span<const Json> lines) {
  std::vector<LabelRecord> out(lines.size());
  std::vector<bool> seen(lines.size(), false);
  for (const Json& j : lines) {
    const Json& idx = field(j, "point_index");
    if (!idx.is_number_integer() || idx.get<std::int64_t>() < 0 ||
        idx.get<std::uint64_t>() >= lines.size()) {
      parse_fail("point_index must be an integer in [0, " + std::to_string(lines.size()) + ")");
    }
    const auto i = idx.get<std::size_t>();
    if (seen[i]) parse_fail("duplicate point_index " + std::to_string(i));
    seen[i] = true;
    LabelRecord r;
    r.point_index = i;
    const Json& cls = field(j, "class_id");
    const Json& inst = field(j, "instance_id");
    if (cls.is_null() != inst.is_null()) parse_fail("class_id and instance_id must both be null or both be set");
    if (!cls.is_null()) r.label = InstanceLabel{integer(j, "class_id"), integer(j, "instance_id")};
    const Json& prov = field(j, "provenance");
    if (!prov.is_string()) parse_fail("provenance must be a string");
    r.provenance = provenance_from_string(prov.get<std::string>());
    out[i] = r;
  }
  return out;
}

std::vector<LabelRecord> make_label_records(const FrameLabels& labels) {
  std::vector<LabelRecord> out(labels.labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {i, labels.labels[i], labels.provenance[i]};
  return out;
}

std::vector<LabelRecord> make_label_records(std::span<const std::optional<InstanceLabel>> labels) {
  std::vector<LabelRecord> out(labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {i, labels[i], labels[i] ? Provenance::kCoarse : Provenance::kUnlabeled};
  }
  return out;
}

std::vector<std::optional<InstanceLabel>> label_column(std::span<const LabelRecord> records) {
  std::vector<std::optional<InstanceLabel>> out;
  out.reserve(records.size());
  for (const LabelRecord& r : records) out.push_back(r.label);
  return out;
}

}  // namespace radcal
