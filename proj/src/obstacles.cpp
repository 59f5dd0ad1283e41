#include "canal/obstacles.hpp"

#include <algorithm>
#include <cmath>

namespace canal {

VesselClass vessel_class_from_string(const std::string& s) {
  if (s == "small_motorboat") return VesselClass::small_motorboat;
  if (s == "sailboat") return VesselClass::sailboat;
  if (s == "muscle_powered") return VesselClass::muscle_powered;
  if (s == "commercial") return VesselClass::commercial;
  if (s == "long_vessel") return VesselClass::long_vessel;
  throw std::invalid_argument("unknown vessel class: " + s);
}

std::string to_string(VesselClass c) {
  switch (c) {
    case VesselClass::small_motorboat: return "small_motorboat";
    case VesselClass::sailboat: return "sailboat";
    case VesselClass::muscle_powered: return "muscle_powered";
    case VesselClass::commercial: return "commercial";
    case VesselClass::long_vessel: return "long_vessel";
  }
  return "small_motorboat";
}

void ObstacleTrack::validate() const {
  if (!(b > 0.0) || a < b)
    throw std::invalid_argument("obstacle " + std::to_string(id) + ": requires a >= b > 0");
  if (samples.empty())
    throw std::invalid_argument("obstacle " + std::to_string(id) + ": empty track");
  for (size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t))
      throw std::invalid_argument("obstacle " + std::to_string(id) +
                                  ": track timestamps not strictly increasing");
  }
}

ObstacleState current_obstacle_state(const ObstacleTrack& track, double t) {
  const auto& s = track.samples;
  ObstacleState out;
  if (t <= s.front().t) {
    out.position = s.front().position;
    out.heading = s.front().heading;
    return out;  // held, not yet moving
  }
  if (t >= s.back().t) {
    out.position = s.back().position;
    out.heading = s.back().heading;
    return out;  // held, parked
  }
  const auto it = std::upper_bound(
      s.begin(), s.end(), t, [](double val, const TrackSample& a) { return val < a.t; });
  const TrackSample& hi = *it;
  const TrackSample& lo = *(it - 1);
  const double dt = hi.t - lo.t;
  const double w = (t - lo.t) / dt;
  out.position = lo.position + w * (hi.position - lo.position);
  out.heading = wrap_angle(lo.heading + w * wrap_angle(hi.heading - lo.heading));
  out.velocity = (hi.position - lo.position) / dt;
  return out;
}

ObstaclePrediction predict_from_state(const ObstacleState& state, double tau, int N) {
  ObstaclePrediction pred;
  pred.stages.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    pred.stages[k].position = state.position + (k * tau) * state.velocity;
    pred.stages[k].heading = state.heading;
    pred.stages[k].velocity = state.velocity;
  }
  return pred;
}

ObstaclePrediction predict_obstacle(const ObstacleTrack& track, double t_now, double tau, int N) {
  return predict_from_state(current_obstacle_state(track, t_now), tau, N);
}

double dynamic_constraint_value(const Vec2& disc_center, const Vec2& obs_position, double phi,
                                double alpha, double beta) {
  const Vec2 delta = disc_center - obs_position;
  const Vec2 local = rot2(-phi) * delta;  // into the ellipse frame
  const double ex = local.x() / alpha;
  const double ey = local.y() / beta;
  return ex * ex + ey * ey;
}

}  // namespace canal
