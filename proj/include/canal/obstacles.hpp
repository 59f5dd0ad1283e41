#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "canal/geometry.hpp"

namespace canal {

enum class VesselClass { small_motorboat, sailboat, muscle_powered, commercial, long_vessel };

VesselClass vessel_class_from_string(const std::string& s);
std::string to_string(VesselClass c);

struct TrackSample {
  double t = 0.0;  // [s]
  Vec2 position{0.0, 0.0};
  double heading = 0.0;  // phi [rad]
  double speed = 0.0;    // [m/s], informational
};

/// Moving vessel: ellipse footprint plus a timestamped trajectory to replay.
struct ObstacleTrack {
  int id = 0;
  double a = 1.0;  // semi-major [m]
  double b = 0.5;  // semi-minor [m]
  std::vector<TrackSample> samples;
  VesselClass vessel_class = VesselClass::small_motorboat;
  double length = 2.0;  // [m]

  /// Throws std::invalid_argument on a < b, non-positive axes, or
  /// non-increasing timestamps.
  void validate() const;
};

struct ObstacleState {
  Vec2 position{0.0, 0.0};
  double heading = 0.0;
  Vec2 velocity{0.0, 0.0};  // world frame [m/s]
};

// Replay state at time t: linear interpolation between bracketing samples,
// velocity from the bracketing finite difference. Outside the sampled range
// the endpoint pose is held with zero velocity.
ObstacleState current_obstacle_state(const ObstacleTrack& track, double t);

/// Constant-velocity forecast over N+1 stages spaced tau apart.
struct ObstaclePrediction {
  std::vector<ObstacleState> stages;  // size N+1
};

ObstaclePrediction predict_obstacle(const ObstacleTrack& track, double t_now, double tau, int N);
ObstaclePrediction predict_from_state(const ObstacleState& state, double tau, int N);

// Rotated-ellipse clearance value of a disc center against an obstacle at
// (obs_position, phi) with inflated semi-axes alpha/beta; > 1 iff the center
// lies outside the ellipse.
double dynamic_constraint_value(const Vec2& disc_center, const Vec2& obs_position, double phi,
                                double alpha, double beta);

}  // namespace canal
