#pragma once

#include <optional>
#include <vector>

#include "canal/geometry.hpp"
#include "canal/obstacles.hpp"
#include "canal/occupancy_grid.hpp"
#include "canal/reference_path.hpp"
#include "canal/regulation.hpp"
#include "canal/vessel_model.hpp"

namespace canal {

enum class PlannerMode { rampcc, lmpcc };

PlannerMode planner_mode_from_string(const std::string& s);
std::string to_string(PlannerMode m);

struct SolverSettings {
  int max_sqp_iters = 60;
  int max_qp_iters = 25;
  double constraint_penalty_weight = 200.0;
  double convergence_tol = 2e-3;
  double trust_region = 3.0;        // initial step bound per thruster [N]
  double trust_region_min = 1e-4;
  int penalty_escalations = 4;
};

struct PlannerConfig {
  int N = 20;
  double tau = 0.5;  // [s]
  Mat2 Q_eps = (Mat2() << 14.0, 0.0, 0.0, 6.0).finished();  // contour, lag
  double Q_v = 4.0;
  double u_ref = 0.6;  // [m/s]
  Eigen::Matrix4d Q_u = 0.01 * Eigen::Matrix4d::Identity();
  RegulationParams regulation;
  double delta = 0.2;   // safety margin [m]
  double u_max = 1.5;   // surge bound [m/s]
  PlannerMode mode = PlannerMode::rampcc;
  SolverSettings solver;

  void validate() const;
  /// Patches fields present in the JSON object onto *this.
  void apply_json(const std::string& json_text);
  static PlannerConfig from_json_file(const std::string& path);
};

/// One obstacle as seen by a single plan: forecast + footprint + role.
struct PlannedObstacle {
  ObstaclePrediction prediction;
  double a = 1.0;
  double b = 0.5;
  bool priority = false;  // latched at plan time, held for the horizon
};

struct PlanProblem {
  VesselState z0;
  double theta0 = 0.0;
  const ReferencePath* path = nullptr;
  const VesselModel* model = nullptr;
  // Halfplanes per footprint disc, computed at z0, applied to every stage.
  std::array<std::vector<LinearConstraint>, 3> static_constraints;
  std::vector<PlannedObstacle> obstacles;
};

enum class SolveStatus { Converged, MaxIters, Infeasible };

std::string to_string(SolveStatus s);

struct PlanResult {
  std::vector<VesselState> states;       // N+1
  std::vector<Vec4> inputs;              // N
  std::vector<double> progress;          // N+1
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  // Per-stage max of (static residual, 1 - dynamic value); <= 0 is feasible.
  std::vector<double> stage_max_residual;
};

struct StageCostEval {
  double cost = 0.0;
  Vec6 grad_z = Vec6::Zero();
  Vec4 grad_u = Vec4::Zero();
  double grad_theta = 0.0;
};

// Tracking + speed + input + regulation cost of one stage with analytic
// gradients. Terminal stages drop the speed and input terms. stage_k selects
// the obstacle prediction stage.
StageCostEval stage_cost(const VesselState& z, const Vec4& u, double theta,
                         const PlanProblem& problem, const PlannerConfig& config, int stage_k,
                         bool terminal);

// Gauss-Newton SQP over the input sequence (single shooting), with quadratic
// penalties for the static/dynamic constraints, a trust region on input
// steps, and penalty-weight escalation. Deterministic.
PlanResult solve(const PlanProblem& problem, const PlanResult* warm_start,
                 const PlannerConfig& config);

/// Zero thrust on all four thrusters.
ThrustCommand fallback_command();

/// Receding-horizon shift: drop stage 0, duplicate the last input, roll the
/// final state out with the dynamics.
PlanResult shift_warm_start(const PlanResult& previous, const VesselModel& model, double tau);

}  // namespace canal
