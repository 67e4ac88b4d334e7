#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radcal/geometry.hpp"
#include "radcal/metrics.hpp"

namespace radcal {

struct CameraObservation {
  int pose_id{0};
  double timestamp{0.0};
  Pixel center;
};

struct RadarObservation {
  int pose_id{0};
  double timestamp{0.0};
  Vec3 center{Vec3::Zero()};
};

struct Correspondence {
  int pose_id{0};
  Pixel image_center;
  Vec3 radar_center{Vec3::Zero()};
  double camera_time{0.0};
  double radar_time{0.0};
};

/// Default pairing tolerance: half a radar frame period at 15 Hz.
inline constexpr double kDefaultSyncTolerance = 0.025;
inline constexpr std::size_t kMinPoses = 3;

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;  // ascending pose_id
  std::vector<int> missing;           // pose ids seen by only one sensor
  std::vector<int> out_of_sync;       // pose ids dropped by the sync tolerance

  [[nodiscard]] std::size_t size() const { return pairs.size(); }
};

/// Joins both streams on pose_id. Throws InvalidArgument on duplicate ids
/// within a stream and TooFewPoses when fewer than three pairs survive.
[[nodiscard]] CorrespondenceSet build_correspondences(std::span<const CameraObservation> cameras,
                                                      std::span<const RadarObservation> radars,
                                                      double sync_tolerance = kDefaultSyncTolerance);

/// Observed minus projected image centre; empty when the radar point falls
/// behind the camera.
[[nodiscard]] std::optional<Residual> reprojection_residual(const CameraIntrinsics& K, const Extrinsics& T,
                                                            const Correspondence& c);

/// The 24 proper rotations of the cube (identity first), zero translation.
[[nodiscard]] std::vector<AxisAngle> cube_rotation_seeds();

struct SolverConfig {
  int max_iterations{200};
  double lambda_init{1e-3};
  double lambda_up{10.0};
  double lambda_down{10.0};
  double cost_rel_tol{1e-12};
  double step_tol{1e-10};
  double jacobian_step{1e-6};
  double behind_camera_penalty{1e4};  // px per residual component
  std::vector<AxisAngle> seeds{cube_rotation_seeds()};

  void validate() const;
};

/// Stacked 2K residual vector over a fixed, pose-sorted correspondence list.
class ReprojectionProblem {
 public:
  ReprojectionProblem(std::vector<Correspondence> pairs, const CameraIntrinsics& K, double behind_camera_penalty);

  [[nodiscard]] std::size_t num_residuals() const { return 2 * pairs_.size(); }
  [[nodiscard]] const std::vector<Correspondence>& pairs() const { return pairs_; }

  [[nodiscard]] Eigen::VectorXd residuals(const Vector6d& params) const;
  [[nodiscard]] double cost(const Vector6d& params) const;
  /// Central-difference Jacobian with per-parameter step `step`.
  [[nodiscard]] Eigen::Matrix<double, Eigen::Dynamic, 6> jacobian(const Vector6d& params, double step) const;

 private:
  std::vector<Correspondence> pairs_;
  CameraIntrinsics K_;
  double penalty_;
};

struct LmTrace {
  std::vector<double> accepted_costs;  // cost after each accepted step, starting with the seed cost
};

struct LmRun {
  Vector6d params{Vector6d::Zero()};
  double cost{0.0};
  int iterations{0};
  bool converged{false};
};

/// Levenberg–Marquardt from one seed. Steps solve (JᵀJ + λ·diag(JᵀJ)) δ = −Jᵀr;
/// rotation is re-canonicalized after every step.
[[nodiscard]] LmRun levenberg_marquardt(const ReprojectionProblem& problem, const Vector6d& seed,
                                        const SolverConfig& cfg, LmTrace* trace = nullptr);

struct PoseResidual {
  int pose_id{0};
  Residual residual;
  bool behind_camera{false};
};

struct CalibrationResult {
  Extrinsics extrinsics;
  AxisAngle parameters;
  std::vector<PoseResidual> per_pose;
  double mre{0.0};
  double rmse{0.0};
  double cost{0.0};
  int iterations{0};
  bool converged{false};
  std::size_t best_seed{0};
};

/// Multistart LM over every seed; keeps the lowest final cost (first seed on ties).
/// Throws TooFewPoses for fewer than three pairs and DegenerateGeometry when
/// the Jacobian at the optimum is rank deficient.
[[nodiscard]] CalibrationResult solve_extrinsics(const CorrespondenceSet& corrs, const CameraIntrinsics& K,
                                                 const SolverConfig& cfg = {});

/// Residuals of arbitrary correspondences under fixed extrinsics (used for held-out poses).
[[nodiscard]] std::vector<PoseResidual> evaluate_residuals(std::span<const Correspondence> pairs,
                                                           const CameraIntrinsics& K, const Extrinsics& T,
                                                           double behind_camera_penalty = 1e4);

}  // namespace radcal
