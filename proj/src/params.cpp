#include "radcal/params.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "radcal/error.hpp"
#include "radcal/io.hpp"
#include "radcal/toml_lite.hpp"

namespace radcal {
namespace {

[[noreturn]] void config_fail(const std::string& what) { throw Error(ErrorCode::kConfig, what); }

// Reads keys from one table and rejects whatever was not read.
class Table {
 public:
  Table(const Json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      table_ = &doc.at(name_);
      if (!table_->is_object()) config_fail("'" + name_ + "' must be a table");
    }
  }

  void read(const char* key, double& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number()) fail_type(key, "a number");
      out = v->get<double>();
    }
  }

  void read(const char* key, int& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number_integer()) fail_type(key, "an integer");
      out = v->get<int>();
    }
  }

  void read(const char* key, std::uint64_t& out) {
    if (const Json* v = take(key)) {
      if (!v->is_number_integer() || v->get<std::int64_t>() < 0) fail_type(key, "a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void read(const char* key, bool& out) {
    if (const Json* v = take(key)) {
      if (!v->is_boolean()) fail_type(key, "a boolean");
      out = v->get<bool>();
    }
  }

  void read(const char* key, Vec3& out) {
    if (const Json* v = take(key)) {
      if (!v->is_array() || v->size() != 3 || !std::all_of(v->begin(), v->end(), [](const Json& e) {
            return e.is_number();
          })) {
        fail_type(key, "an array of three numbers");
      }
      out = Vec3((*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>());
    }
  }

  void finish() const {
    if (!table_) return;
    for (auto it = table_->begin(); it != table_->end(); ++it) {
      if (!seen_.count(it.key())) config_fail("unknown key '" + name_ + "." + it.key() + "'");
    }
  }

 private:
  const Json* take(const char* key) {
    seen_.insert(key);
    if (!table_) return nullptr;
    const auto it = table_->find(key);
    return it == table_->end() ? nullptr : &*it;
  }

  [[noreturn]] void fail_type(const char* key, const char* expected) const {
    config_fail("'" + name_ + "." + key + "' must be " + expected);
  }

  std::string name_;
  const Json* table_{nullptr};
  std::set<std::string> seen_;
};

void reject_unknown_tables(const Json& doc, const std::set<std::string>& known) {
  if (!doc.is_object()) config_fail("configuration must be a table/object at the top level");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.count(it.key())) config_fail("unknown table '" + it.key() + "'");
  }
}

template <typename F>
void rethrow_as_config(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfig) throw;
    config_fail(e.what());
  }
}

}  // namespace

void PipelineParams::validate() const {
  rethrow_as_config([&] {
    filter.validate();
    cluster.validate();
    solver.validate();
    label.validate();
  });
  if (!(sync_tolerance >= 0.0)) config_fail("sync.tolerance_s must be non-negative");
}

Json load_config_document(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".toml") return parse_toml(text);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    config_fail(path.string() + ": " + e.what());
  }
}

PipelineParams params_from_json(const Json& doc) {
  reject_unknown_tables(doc, {"filter", "cluster", "solver", "label", "sync"});
  PipelineParams p;

  Table f(doc, "filter");
  f.read("min_range_m", p.filter.min_range);
  f.read("max_range_m", p.filter.max_range);
  f.read("max_speed_mps", p.filter.max_speed);
  f.read("min_rcs_dbsm", p.filter.min_rcs);
  f.finish();

  Table c(doc, "cluster");
  c.read("eps_m", p.cluster.eps);
  c.read("min_points", p.cluster.min_points);
  c.finish();

  Table s(doc, "solver");
  bool multistart = true;
  s.read("max_iterations", p.solver.max_iterations);
  s.read("lambda_init", p.solver.lambda_init);
  s.read("lambda_up", p.solver.lambda_up);
  s.read("lambda_down", p.solver.lambda_down);
  s.read("cost_rel_tol", p.solver.cost_rel_tol);
  s.read("step_tol", p.solver.step_tol);
  s.read("jacobian_step", p.solver.jacobian_step);
  s.read("behind_camera_penalty_px", p.solver.behind_camera_penalty);
  s.read("multistart", multistart);
  s.finish();
  if (!multistart) p.solver.seeds = {AxisAngle{}};

  Table l(doc, "label");
  l.read("depth_tolerance_m", p.label.depth_tolerance);
  l.read("rcs_sigma_scale", p.label.rcs_sigma_scale);
  l.read("velocity_sigma_scale", p.label.velocity_sigma_scale);
  l.read("static_speed_mps", p.label.static_speed);
  l.read("min_velocity_sigma_mps", p.label.min_velocity_sigma);
  l.read("search_radius_m", p.label.search_radius);
  l.read("position_sigma_m", p.label.position_sigma);
  l.read("affinity_threshold", p.label.affinity_threshold);
  l.read("min_cluster_size", p.label.min_cluster_size);
  l.read("min_rcs_sigma_dbsm", p.label.min_rcs_sigma);
  l.finish();

  Table y(doc, "sync");
  y.read("tolerance_s", p.sync_tolerance);
  y.finish();

  p.validate();
  return p;
}

Json to_json(const PipelineParams& p) {
  return {
      {"filter",
       {{"min_range_m", p.filter.min_range},
        {"max_range_m", p.filter.max_range},
        {"max_speed_mps", p.filter.max_speed},
        {"min_rcs_dbsm", p.filter.min_rcs}}},
      {"cluster", {{"eps_m", p.cluster.eps}, {"min_points", p.cluster.min_points}}},
      {"solver",
       {{"max_iterations", p.solver.max_iterations},
        {"lambda_init", p.solver.lambda_init},
        {"lambda_up", p.solver.lambda_up},
        {"lambda_down", p.solver.lambda_down},
        {"cost_rel_tol", p.solver.cost_rel_tol},
        {"step_tol", p.solver.step_tol},
        {"jacobian_step", p.solver.jacobian_step},
        {"behind_camera_penalty_px", p.solver.behind_camera_penalty},
        {"multistart", p.solver.seeds.size() > 1}}},
      {"label",
       {{"depth_tolerance_m", p.label.depth_tolerance},
        {"rcs_sigma_scale", p.label.rcs_sigma_scale},
        {"velocity_sigma_scale", p.label.velocity_sigma_scale},
        {"static_speed_mps", p.label.static_speed},
        {"min_velocity_sigma_mps", p.label.min_velocity_sigma},
        {"search_radius_m", p.label.search_radius},
        {"position_sigma_m", p.label.position_sigma},
        {"affinity_threshold", p.label.affinity_threshold},
        {"min_cluster_size", p.label.min_cluster_size},
        {"min_rcs_sigma_dbsm", p.label.min_rcs_sigma}}},
      {"sync", {{"tolerance_s", p.sync_tolerance}}},
  };
}

PipelineParams load_params(const std::filesystem::path& path) { return params_from_json(load_config_document(path)); }

SynthConfig synth_config_from_json(const Json& doc) {
  reject_unknown_tables(doc, {"calibration", "labeling"});
  SynthConfig cfg;
  SceneConfig& s = cfg.calibration;

  Table c(doc, "calibration");
  Vec3 axis_angle = Vec3::Constant(std::numeric_limits<double>::quiet_NaN());
  c.read("gt_axis_angle", axis_angle);
  if (axis_angle.allFinite()) s.ground_truth.rotation = axis_angle_to_rotation(axis_angle);
  c.read("gt_translation_m", s.ground_truth.translation);
  c.read("poses", s.poses);
  c.read("board_squares_x", s.board.squares_x);
  c.read("board_squares_y", s.board.squares_y);
  c.read("square_size_m", s.square_size);
  c.read("min_range_m", s.min_range);
  c.read("max_range_m", s.max_range);
  c.read("max_board_tilt_deg", s.max_board_tilt_deg);
  c.read("apex_offset_m", s.apex_offset);
  c.read("pixel_sigma_px", s.pixel_sigma);
  c.read("radar_position_sigma_m", s.radar_position_sigma);
  c.read("radar_range_sigma_m", s.radar_range_sigma);
  c.read("radar_angle_sigma_rad", s.radar_angle_sigma);
  c.read("rcs_sigma_dbsm", s.rcs_sigma);
  c.read("clutter_points", s.clutter_points);
  c.read("moving_clutter", s.moving_clutter);
  c.read("far_clutter", s.far_clutter);
  c.read("clutter_only_poses", s.clutter_only_poses);
  c.read("timestamp_jitter_s", s.timestamp_jitter);
  c.read("radar_fov_h_deg", s.radar_fov_h_deg);
  c.read("radar_fov_v_deg", s.radar_fov_v_deg);
  c.read("seed", s.seed);
  c.finish();

  LabelSceneConfig& l = cfg.labeling;
  Table b(doc, "labeling");
  b.read("objects", l.objects);
  b.read("frames", l.frames);
  b.read("classes", l.classes);
  b.read("min_points_per_object", l.min_points_per_object);
  b.read("max_points_per_object", l.max_points_per_object);
  b.read("clutter_points", l.clutter_points);
  b.read("min_range_m", l.min_range);
  b.read("max_range_m", l.max_range);
  b.read("fp_rate", l.fp_rate);
  b.read("fn_rate", l.fn_rate);
  b.read("mask_margin_px", l.mask_margin_px);
  b.read("frame_period_s", l.frame_period);
  b.read("seed", l.seed);
  b.finish();

  rethrow_as_config([&] {
    s.validate();
    l.validate();
  });
  return cfg;
}

}  // namespace radcal
