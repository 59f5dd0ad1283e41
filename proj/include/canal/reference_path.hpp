#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "canal/geometry.hpp"

namespace canal {

class InvalidPath : public std::runtime_error {
 public:
  explicit InvalidPath(const std::string& what) : std::runtime_error(what) {}
};

/// Point on the reference path at arc progress theta.
struct PathSample {
  Vec2 point{0.0, 0.0};
  Vec2 tangent{1.0, 0.0};        // unit
  double tangent_heading = 0.0;  // wrapped to (-pi, pi]
  double curvature = 0.0;        // signed, d(tangent)/d(theta) = curvature * normal
  double theta = 0.0;            // clamped arc progress [m]
};

// Natural cubic spline through waypoints, reparameterized by arc length.
// Immutable after construction; all queries are const and thread-safe.
class ReferencePath {
 public:
  /// Fits the spline and builds the arc-length table (Gauss quadrature per
  /// segment). Throws InvalidPath on fewer than 2 waypoints or duplicate
  /// consecutive waypoints.
  static ReferencePath build(const std::vector<Vec2>& waypoints);

  /// Samples the path at theta, clamped to [0, total_length].
  PathSample sample(double theta) const;

  // Signed contour (positive to port of the tangent) and lag errors of a
  // world position against the path point at theta.
  struct ContourLag {
    double contour = 0.0;
    double lag = 0.0;
  };
  ContourLag contour_lag_error(double theta, const Vec2& position) const;

  /// Arc progress of the local closest point. With a hint the search is
  /// restricted to [hint - window, hint + window]; otherwise a 1000-point
  /// global grid seeds the local refinement.
  double project_progress(const Vec2& position, std::optional<double> hint = std::nullopt,
                          double window = 30.0) const;

  double total_length() const { return total_length_; }
  const std::vector<Vec2>& waypoints() const { return waypoints_; }
  /// Cumulative arc progress of each waypoint.
  const std::vector<double>& waypoint_arcs() const { return waypoint_arcs_; }

 private:
  ReferencePath() = default;

  struct Segment {
    // Cubic coefficients per axis on the segment-local parameter s in [0, h]:
    // p(s) = a + b s + c s^2 + d s^3.
    Vec2 a, b, c, d;
    double h = 0.0;  // chord-parameter length
  };

  Vec2 eval_local(int seg, double s) const;
  Vec2 eval_d1(int seg, double s) const;
  Vec2 eval_d2(int seg, double s) const;
  /// Arc length from segment start to local parameter s (Gauss quadrature).
  double arc_from_segment_start(int seg, double s) const;
  /// Maps clamped theta to (segment index, local parameter).
  std::pair<int, double> locate(double theta) const;

  std::vector<Vec2> waypoints_;
  std::vector<Segment> segments_;
  // Inversion table: per segment, local parameters and cumulative arc values.
  std::vector<std::vector<double>> sub_s_;
  std::vector<std::vector<double>> sub_arc_;
  std::vector<double> seg_arc_start_;  // cumulative arc at segment starts
  std::vector<double> waypoint_arcs_;
  double total_length_ = 0.0;
};

}  // namespace canal
