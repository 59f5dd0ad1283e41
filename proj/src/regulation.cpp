#include "canal/regulation.hpp"

#include <cmath>
#include <stdexcept>

namespace canal {

std::string to_string(EncounterRegion r) {
  switch (r) {
    case EncounterRegion::HeadOn: return "head_on";
    case EncounterRegion::CrossingStarboard: return "crossing_starboard";
    case EncounterRegion::CrossingPort: return "crossing_port";
    case EncounterRegion::Overtaking: return "overtaking";
  }
  return "head_on";
}

double relative_bearing(const Pose2& ego, const Vec2& point) {
  const Vec2 rel = rot2(-ego.heading) * (point - ego.position);
  return wrap_angle(-std::atan2(rel.y(), rel.x()));
}

EncounterRegion classify_encounter(const Pose2& ego, const Pose2& obs,
                                   const RegulationParams& params) {
  const double bearing = relative_bearing(ego, obs.position);
  if (bearing >= -params.theta_ho && bearing < params.theta_ho) return EncounterRegion::HeadOn;
  if (bearing >= params.theta_ho && bearing < params.theta_ot)
    return EncounterRegion::CrossingStarboard;
  if (bearing > -params.theta_ot && bearing < -params.theta_ho)
    return EncounterRegion::CrossingPort;
  return EncounterRegion::Overtaking;
}

bool is_priority(const Pose2& ego, const ObstacleTrack& obs, const Pose2& obs_pose,
                 const RegulationParams& params) {
  switch (obs.vessel_class) {
    case VesselClass::sailboat:
    case VesselClass::muscle_powered:
    case VesselClass::commercial:
      return true;
    default:
      break;
  }
  if (obs.length > 20.0) return true;
  return classify_encounter(ego, obs_pose, params) == EncounterRegion::CrossingStarboard &&
         classify_encounter(obs_pose, ego, params) == EncounterRegion::CrossingPort;
}

Vec2 ho_ellipse_center(const Vec2& obs_position, double phi, const RegulationParams& params) {
  return obs_position + rot2(phi) * Vec2(params.c, params.d_sign * params.d);
}

std::pair<double, double> ho_sigmas(double a, double b, double r_disc,
                                    const RegulationParams& params) {
  const double sx = params.g * (a + r_disc);
  const double sy = params.h * (b + r_disc);
  if (sx <= 0.0 || sy <= 0.0) throw std::invalid_argument("ho_sigmas: degenerate sigma");
  return {sx, sy};
}

CostWithGradient gaussian_cost(const Vec2& p, const Vec2& center, double sigma_x, double sigma_y,
                               double phi, double Q) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double inv2x = 1.0 / (2.0 * sigma_x * sigma_x);
  const double inv2y = 1.0 / (2.0 * sigma_y * sigma_y);
  const double lambda = c * c * inv2x + s * s * inv2y;
  const double mu = 2.0 * s * c * (0.5 * inv2x - 0.5 * inv2y);
  const double nu = s * s * inv2x + c * c * inv2y;
  const double dx = p.x() - center.x();
  const double dy = p.y() - center.y();
  const double q = lambda * dx * dx + 2.0 * mu * dx * dy + nu * dy * dy;
  CostWithGradient out;
  out.value = Q * std::exp(-q);
  out.gradient =
      Vec2(-out.value * (2.0 * lambda * dx + 2.0 * mu * dy),
           -out.value * (2.0 * mu * dx + 2.0 * nu * dy));
  return out;
}

std::vector<CostWithGradient> regulation_terms(const Vec2& p_ego,
                                               const std::vector<ObstacleAtStage>& obstacles,
                                               const RegulationParams& params, double r_disc,
                                               bool centered) {
  std::vector<CostWithGradient> terms;
  terms.reserve(obstacles.size());
  for (const auto& obs : obstacles) {
    const auto [sx, sy] = ho_sigmas(obs.a, obs.b, r_disc, params);
    const Vec2 center =
        centered ? obs.position : ho_ellipse_center(obs.position, obs.heading, params);
    terms.push_back(gaussian_cost(p_ego, center, sx, sy, obs.heading, params.Q_HO));
    if (!centered && obs.priority) {
      // Long forward ellipse keeping the ego out of the priority vessel's way.
      const Vec2 row_center = obs.position + rot2(obs.heading) * Vec2(params.f, 0.0);
      terms.push_back(
          gaussian_cost(p_ego, row_center, params.e, obs.b + r_disc, obs.heading, params.Q_RoW));
    }
  }
  return terms;
}

CostWithGradient regulation_cost(const Vec2& p_ego, const std::vector<ObstacleAtStage>& obstacles,
                                 const RegulationParams& params, double r_disc, bool centered) {
  CostWithGradient total;
  for (const auto& term : regulation_terms(p_ego, obstacles, params, r_disc, centered)) {
    total.value += term.value;
    total.gradient += term.gradient;
  }
  return total;
}

}  // namespace canal
