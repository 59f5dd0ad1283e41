#pragma once

#include <vector>

#include "canal/geometry.hpp"
#include "canal/obstacles.hpp"

namespace canal {

enum class EncounterRegion { HeadOn, CrossingStarboard, CrossingPort, Overtaking };

std::string to_string(EncounterRegion r);

/// Parameters of the off-center Gaussian regulation costs.
struct RegulationParams {
  double c = 1.35;       // forward ellipse shift [m]
  double d = 0.225;      // starboard ellipse shift [m]
  double g = 1.5;        // sigma_x scale
  double h = 1.5;        // sigma_y scale
  double Q_HO = 30.0;    // head-on / overtake weight
  double e = 2.7;        // RoW longitudinal sigma [m]
  double f = 1.8;        // RoW forward shift [m]
  double Q_RoW = 60.0;   // right-of-way weight
  double d_sign = -1.0;  // starboard shift enters body-y with this sign
  double theta_ho = 15.0 * M_PI / 180.0;     // head-on sector half-width
  double theta_ot = 112.5 * M_PI / 180.0;    // overtaking boundary (abaft)
};

// Relative bearing of `point` from `ego`, positive toward starboard
// (body-frame y is positive to port).
double relative_bearing(const Pose2& ego, const Vec2& point);

// Fig.-4-style partition by relative bearing: [-theta_ho, theta_ho) head-on,
// [theta_ho, theta_ot) crossing starboard, (-theta_ot, -theta_ho) crossing
// port, remainder overtaking.
EncounterRegion classify_encounter(const Pose2& ego, const Pose2& obs,
                                   const RegulationParams& params = RegulationParams{});

// True for the always-give-way classes (sailboat, muscle powered,
// commercial), vessels longer than 20 m, and the geometric starboard-crossing
// stand-on case.
bool is_priority(const Pose2& ego, const ObstacleTrack& obs, const Pose2& obs_pose,
                 const RegulationParams& params = RegulationParams{});

/// Gaussian center shifted c forward and d toward the obstacle's starboard.
Vec2 ho_ellipse_center(const Vec2& obs_position, double phi, const RegulationParams& params);

/// sigma_x = g (a + r_disc), sigma_y = h (b + r_disc); throws on a degenerate
/// (zero) result.
std::pair<double, double> ho_sigmas(double a, double b, double r_disc,
                                    const RegulationParams& params);

struct CostWithGradient {
  double value = 0.0;
  Vec2 gradient{0.0, 0.0};  // w.r.t. the query point
};

/// Rotated 2D Gaussian Q exp(-(lambda dx^2 + 2 mu dx dy + nu dy^2)).
CostWithGradient gaussian_cost(const Vec2& p, const Vec2& center, double sigma_x, double sigma_y,
                               double phi, double Q);

/// One obstacle's pose and footprint at a prediction stage.
struct ObstacleAtStage {
  Vec2 position{0.0, 0.0};
  double heading = 0.0;
  double a = 1.0;
  double b = 0.5;
  bool priority = false;
};

// J_reg = J_HO summed over all obstacles + J_RoW over priority obstacles.
// With `centered` set the J_HO term uses c = d = 0 and J_RoW is dropped
// (the LMPCC baseline's repulsive cost).
CostWithGradient regulation_cost(const Vec2& p_ego, const std::vector<ObstacleAtStage>& obstacles,
                                 const RegulationParams& params, double r_disc,
                                 bool centered = false);

/// The individual Gaussian terms behind regulation_cost (one J_HO term per
/// obstacle plus one J_RoW term per priority obstacle), for callers that need
/// per-term curvature information.
std::vector<CostWithGradient> regulation_terms(const Vec2& p_ego,
                                               const std::vector<ObstacleAtStage>& obstacles,
                                               const RegulationParams& params, double r_disc,
                                               bool centered = false);

}  // namespace canal
