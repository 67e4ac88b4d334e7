#include "radcal/calibration.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <spdlog/spdlog.h>
#include <string>

#include "radcal/error.hpp"

namespace radcal {

namespace {

constexpr double kLambdaMax = 1e32;
constexpr double kRankTolerance = 1e-6;

Vector6d canonical_params(const Vector6d& p) {
  Vector6d out = p;
  out.head<3>() = canonicalize_axis_angle(p.head<3>());
  return out;
}

template <typename Observation>
std::map<int, const Observation*> index_by_pose(std::span<const Observation> obs, const char* stream) {
  std::map<int, const Observation*> by_id;
  for (const Observation& o : obs) {
    if (!by_id.emplace(o.pose_id, &o).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("duplicate pose id ") + std::to_string(o.pose_id) + " in " + stream + " stream");
    }
  }
  return by_id;
}

}  // namespace

CorrespondenceSet build_correspondences(std::span<const CameraObservation> cameras,
                                        std::span<const RadarObservation> radars, double sync_tolerance) {
  const auto cam_by_id = index_by_pose(cameras, "camera");
  const auto radar_by_id = index_by_pose(radars, "radar");

  CorrespondenceSet set;
  for (const auto& [id, cam] : cam_by_id) {
    const auto it = radar_by_id.find(id);
    if (it == radar_by_id.end()) {
      set.missing.push_back(id);
      continue;
    }
    const RadarObservation* radar = it->second;
    if (std::abs(cam->timestamp - radar->timestamp) > sync_tolerance) {
      spdlog::warn("pose {}: camera/radar timestamps differ by {:.4f} s, dropped", id,
                   std::abs(cam->timestamp - radar->timestamp));
      set.out_of_sync.push_back(id);
      continue;
    }
    set.pairs.push_back({id, cam->center, radar->center, cam->timestamp, radar->timestamp});
  }
  for (const auto& [id, radar] : radar_by_id) {
    if (!cam_by_id.contains(id)) set.missing.push_back(id);
  }
  std::sort(set.missing.begin(), set.missing.end());
  for (int id : set.missing) spdlog::info("pose {} observed by one sensor only, dropped", id);

  if (set.pairs.size() < kMinPoses) {
    throw Error(ErrorCode::kTooFewPoses,
                std::to_string(set.pairs.size()) + " usable poses, at least " + std::to_string(kMinPoses) + " required");
  }
  return set;
}

std::optional<Residual> reprojection_residual(const CameraIntrinsics& K, const Extrinsics& T,
                                              const Correspondence& c) {
  const auto px = project(K, T, c.radar_center);
  if (!px) return std::nullopt;
  return Residual{c.image_center.u - px->u, c.image_center.v - px->v};
}

std::vector<AxisAngle> cube_rotation_seeds() {
  std::vector<AxisAngle> seeds;
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Mat3 r = Mat3::Zero();
      for (int row = 0; row < 3; ++row) r(row, perm[row]) = (signs >> row) & 1 ? -1.0 : 1.0;
      if (r.determinant() < 0.0) continue;
      AxisAngle seed;
      seed.rotation = rotation_to_axis_angle(r);
      seeds.push_back(seed);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return seeds;
}

void SolverConfig::validate() const {
  if (max_iterations <= 0 || !(lambda_init > 0.0) || !(lambda_up > 1.0) || !(lambda_down > 1.0) ||
      !(cost_rel_tol > 0.0) || !(step_tol > 0.0) || !(jacobian_step > 0.0) || !(behind_camera_penalty > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "solver settings must be positive (lambda factors > 1)");
  }
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "solver needs at least one seed");
}

ReprojectionProblem::ReprojectionProblem(std::vector<Correspondence> pairs, const CameraIntrinsics& K,
                                         double behind_camera_penalty)
    : pairs_(std::move(pairs)), K_(K), penalty_(behind_camera_penalty) {
  // Fixed summation order makes the solve independent of input ordering.
  std::sort(pairs_.begin(), pairs_.end(),
            [](const Correspondence& a, const Correspondence& b) { return a.pose_id < b.pose_id; });
}

Eigen::VectorXd ReprojectionProblem::residuals(const Vector6d& params) const {
  const Extrinsics T = to_extrinsics(AxisAngle::from_vector(params));
  Eigen::VectorXd r(static_cast<Eigen::Index>(num_residuals()));
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto res = reprojection_residual(K_, T, pairs_[i]);
    const auto row = static_cast<Eigen::Index>(2 * i);
    r[row] = res ? res->du : penalty_;
    r[row + 1] = res ? res->dv : penalty_;
  }
  return r;
}

double ReprojectionProblem::cost(const Vector6d& params) const { return residuals(params).squaredNorm(); }

Eigen::Matrix<double, Eigen::Dynamic, 6> ReprojectionProblem::jacobian(const Vector6d& params, double step) const {
  Eigen::Matrix<double, Eigen::Dynamic, 6> J(static_cast<Eigen::Index>(num_residuals()), 6);
  for (int k = 0; k < 6; ++k) {
    Vector6d plus = params;
    Vector6d minus = params;
    plus[k] += step;
    minus[k] -= step;
    J.col(k) = (residuals(plus) - residuals(minus)) / (2.0 * step);
  }
  return J;
}

LmRun levenberg_marquardt(const ReprojectionProblem& problem, const Vector6d& seed, const SolverConfig& cfg,
                          LmTrace* trace) {
  LmRun run;
  run.params = canonical_params(seed);
  Eigen::VectorXd r = problem.residuals(run.params);
  run.cost = r.squaredNorm();
  if (trace) trace->accepted_costs.push_back(run.cost);

  double lambda = cfg.lambda_init;
  bool need_linearization = true;
  Eigen::Matrix<double, 6, 6> H;
  Vector6d g;
  Vector6d damping;

  while (run.iterations < cfg.max_iterations) {
    if (need_linearization) {
      const auto J = problem.jacobian(run.params, cfg.jacobian_step);
      H = J.transpose() * J;
      g = J.transpose() * r;
      const double diag_max = std::max(1.0, H.diagonal().maxCoeff());
      damping = H.diagonal().cwiseMax(1e-12 * diag_max);
      need_linearization = false;
      if (g.lpNorm<Eigen::Infinity>() == 0.0) {
        run.converged = true;  // stationary (exact fit or flat penalty region)
        break;
      }
    }
    ++run.iterations;

    Eigen::Matrix<double, 6, 6> A = H;
    A.diagonal() += lambda * damping;
    const Vector6d delta = A.ldlt().solve(-g);
    const bool tiny_step = delta.norm() <= cfg.step_tol * (run.params.norm() + cfg.step_tol);

    const Vector6d candidate = canonical_params(run.params + delta);
    const Eigen::VectorXd r_new = problem.residuals(candidate);
    const double cost_new = r_new.squaredNorm();

    if (delta.allFinite() && cost_new < run.cost) {
      const double decrease = run.cost - cost_new;
      const double previous = run.cost;
      run.params = candidate;
      run.cost = cost_new;
      r = r_new;
      lambda = std::max(lambda / cfg.lambda_down, 1e-300);
      need_linearization = true;
      if (trace) trace->accepted_costs.push_back(run.cost);
      if (tiny_step || decrease <= cfg.cost_rel_tol * previous) {
        run.converged = true;
        break;
      }
    } else {
      if (tiny_step) {
        run.converged = true;  // no representable improvement left
        break;
      }
      lambda *= cfg.lambda_up;
      if (lambda > kLambdaMax) {
        run.converged = true;
        break;
      }
    }
  }
  return run;
}

std::vector<PoseResidual> evaluate_residuals(std::span<const Correspondence> pairs, const CameraIntrinsics& K,
                                             const Extrinsics& T, double behind_camera_penalty) {
  std::vector<PoseResidual> out;
  out.reserve(pairs.size());
  for (const Correspondence& c : pairs) {
    PoseResidual pr;
    pr.pose_id = c.pose_id;
    if (const auto res = reprojection_residual(K, T, c)) {
      pr.residual = *res;
    } else {
      pr.residual = {behind_camera_penalty, behind_camera_penalty};
      pr.behind_camera = true;
    }
    out.push_back(pr);
  }
  std::sort(out.begin(), out.end(), [](const PoseResidual& a, const PoseResidual& b) { return a.pose_id < b.pose_id; });
  return out;
}

CalibrationResult solve_extrinsics(const CorrespondenceSet& corrs, const CameraIntrinsics& K,
                                   const SolverConfig& cfg) {
  if (corrs.pairs.size() < kMinPoses) {
    throw Error(ErrorCode::kTooFewPoses, std::to_string(corrs.pairs.size()) + " poses, at least 3 required");
  }
  K.validate();
  cfg.validate();

  const ReprojectionProblem problem(corrs.pairs, K, cfg.behind_camera_penalty);

  LmRun best;
  std::size_t best_seed = 0;
  bool have_best = false;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    const LmRun run = levenberg_marquardt(problem, cfg.seeds[s].to_vector(), cfg);
    spdlog::debug("seed {}: cost {:.6e} after {} iterations{}", s, run.cost, run.iterations,
                  run.converged ? "" : " (not converged)");
    if (!have_best || run.cost < best.cost) {
      best = run;
      best_seed = s;
      have_best = true;
    }
  }

  // Rank check on the column-normalised Jacobian at the optimum.
  Eigen::Matrix<double, Eigen::Dynamic, 6> J = problem.jacobian(best.params, cfg.jacobian_step);
  for (int k = 0; k < 6; ++k) {
    const double n = J.col(k).norm();
    if (n == 0.0) throw Error(ErrorCode::kDegenerateGeometry, "parameter " + std::to_string(k) + " is unobservable");
    J.col(k) /= n;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& sv = svd.singularValues();
  if (sv[sv.size() - 1] <= kRankTolerance * sv[0]) {
    throw Error(ErrorCode::kDegenerateGeometry, "Jacobian is rank deficient at the optimum (condition ratio " +
                                                    std::to_string(sv[sv.size() - 1] / sv[0]) + ")");
  }

  CalibrationResult result;
  result.parameters = AxisAngle::from_vector(best.params);
  result.extrinsics = to_extrinsics(result.parameters);
  result.extrinsics.rotation = orthonormalize(result.extrinsics.rotation);
  if (!result.extrinsics.is_valid()) {
    throw Error(ErrorCode::kDegenerateGeometry, "recovered rotation failed the orthonormality check");
  }
  result.per_pose = evaluate_residuals(problem.pairs(), K, result.extrinsics, cfg.behind_camera_penalty);
  std::vector<Residual> residuals;
  residuals.reserve(result.per_pose.size());
  for (const PoseResidual& p : result.per_pose) residuals.push_back(p.residual);
  result.mre = mre(residuals);
  result.rmse = rmse(residuals);
  result.cost = best.cost;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.best_seed = best_seed;
  return result;
}

}  // namespace radcal
