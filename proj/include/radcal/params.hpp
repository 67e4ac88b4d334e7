#pragma once

#include <filesystem>

#include "radcal/autolabel.hpp"
#include "radcal/calibration.hpp"
#include "radcal/canonical_json.hpp"
#include "radcal/radar_features.hpp"
#include "radcal/synth.hpp"

namespace radcal {

/// Every tunable of the calibration and labeling pipelines.
struct PipelineParams {
  FilterParams filter;
  ClusterParams cluster;
  SolverConfig solver;
  LabelParams label;
  double sync_tolerance{kDefaultSyncTolerance};  // s

  void validate() const;
};

/// Reads `.toml` with the TOML subset reader and anything else as JSON.
/// Throws kIo when the file is missing and kConfig when it does not parse.
[[nodiscard]] Json load_config_document(const std::filesystem::path& path);

/// Overrides defaults from the tables filter, cluster, solver, label and sync.
/// Unknown tables or keys and wrongly typed values throw kConfig.
[[nodiscard]] PipelineParams params_from_json(const Json& doc);
[[nodiscard]] Json to_json(const PipelineParams& p);
[[nodiscard]] PipelineParams load_params(const std::filesystem::path& path);

/// Scene generator settings from the `calibration` and `labeling` tables of a
/// synth config. Both tables are optional; other top-level tables are rejected.
struct SynthConfig {
  SceneConfig calibration;
  LabelSceneConfig labeling;
};

[[nodiscard]] SynthConfig synth_config_from_json(const Json& doc);

}  // namespace radcal
