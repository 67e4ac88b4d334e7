#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radcal/autolabel.hpp"
#include "radcal/calibration.hpp"
#include "radcal/camera_features.hpp"
#include "radcal/canonical_json.hpp"
#include "radcal/radar_features.hpp"

namespace radcal {

namespace fs = std::filesystem;

// ---- plumbing ---------------------------------------------------------------

/// Throws Error(kIo) when the file cannot be read.
[[nodiscard]] std::string read_text(const fs::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_text_atomic(const fs::path& path, std::string_view content);

/// kIo when missing, kParse when malformed.
[[nodiscard]] Json read_json(const fs::path& path);
/// One value per non-blank line.
[[nodiscard]] std::vector<Json> read_json_lines(const fs::path& path);

void write_json(const fs::path& path, const Json& j);
void write_json_lines(const fs::path& path, std::span<const Json> records);

/// Regular files in `dir` with one of the extensions, sorted by filename.
/// Throws kIo when `dir` is not a directory.
[[nodiscard]] std::vector<fs::path> list_files(const fs::path& dir, std::span<const std::string_view> extensions);

// ---- corners ----------------------------------------------------------------

struct CornerFile {
  int pose_id{0};
  double timestamp{0.0};
  CornerSet corners;
};

[[nodiscard]] Json to_json(const CornerFile& f);
[[nodiscard]] CornerFile corner_file_from_json(const Json& j);

// ---- radar frames -----------------------------------------------------------

/// A radar frame as stored: exactly one of spherical or Cartesian points.
struct RadarFrameFile {
  double timestamp{0.0};
  std::optional<int> pose_id;
  bool cartesian{false};
  std::vector<SphericalReturn> spherical;
  std::vector<RadarPoint> points;

  [[nodiscard]] RadarFrame to_frame() const;               // spherical view
  [[nodiscard]] std::vector<RadarPoint> to_points() const;  // Cartesian view
};

[[nodiscard]] Json to_json(const RadarFrameFile& f);
[[nodiscard]] RadarFrameFile radar_frame_from_json(const Json& j);
/// `.json` holds one frame, `.jsonl` one frame per line.
[[nodiscard]] std::vector<RadarFrameFile> read_radar_frames(const fs::path& path);

// ---- intrinsics -------------------------------------------------------------

[[nodiscard]] Json to_json(const CameraIntrinsics& K);
[[nodiscard]] CameraIntrinsics intrinsics_from_json(const Json& j);

// ---- masks ------------------------------------------------------------------

struct MaskFile {
  int width{0};
  int height{0};
  std::vector<InstanceMask> instances;
};

[[nodiscard]] Json to_json(const MaskFile& f);
[[nodiscard]] MaskFile mask_file_from_json(const Json& j);

// ---- calibration ------------------------------------------------------------

struct HoldoutReport {
  std::vector<int> train_pose_ids;
  std::vector<int> test_pose_ids;
  double train_mre{0.0};
  double train_rmse{0.0};
  double test_mre{0.0};
  double test_rmse{0.0};
  std::vector<PoseResidual> test_per_pose;
};

struct CalibrationFile {
  Extrinsics extrinsics;
  CameraIntrinsics intrinsics;
  double mre{0.0};
  double rmse{0.0};
  std::vector<PoseResidual> per_pose;
  bool converged{true};
  int iterations{0};
  std::optional<HoldoutReport> holdout;
  Json config = Json::object();
};

/// Rotation orthonormality tolerance applied on load.
inline constexpr double kCalibrationLoadTolerance = 1e-6;

[[nodiscard]] Json to_json(const CalibrationFile& f);
/// Throws kParse when the rotation is not orthonormal within 1e-6.
[[nodiscard]] CalibrationFile calibration_file_from_json(const Json& j);

// ---- labels -----------------------------------------------------------------

struct LabelRecord {
  std::size_t point_index{0};
  std::optional<InstanceLabel> label;
  Provenance provenance{Provenance::kUnlabeled};
};

[[nodiscard]] std::vector<Json> labels_to_json(std::span<const LabelRecord> records);
/// Requires unique indices covering 0..n-1; returns records sorted by index.
[[nodiscard]] std::vector<LabelRecord> labels_from_json(std::span<const Json> lines);

[[nodiscard]] std::vector<LabelRecord> make_label_records(const FrameLabels& labels);
[[nodiscard]] std::vector<LabelRecord> make_label_records(std::span<const std::optional<InstanceLabel>> labels);
[[nodiscard]] std::vector<std::optional<InstanceLabel>> label_column(std::span<const LabelRecord> records);

[[nodiscard]] Provenance provenance_from_string(std::string_view s);

}  // namespace radcal
