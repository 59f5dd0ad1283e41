#include "canal/reference_path.hpp"

#include <algorithm>
#include <cmath>

namespace canal {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGaussNodes[8] = {-0.9602898564975363, -0.7966664774136267,
                                   -0.5255324099163290, -0.1834346424956498,
                                   0.1834346424956498,  0.5255324099163290,
                                   0.7966664774136267,  0.9602898564975363};
constexpr double kGaussWeights[8] = {0.1012285362903763, 0.2223810344533745,
                                     0.3137066458778873, 0.3626837833783620,
                                     0.3626837833783620, 0.3137066458778873,
                                     0.2223810344533745, 0.1012285362903763};

constexpr int kSubSamples = 32;  // inversion table resolution per segment

}  // namespace

ReferencePath ReferencePath::build(const std::vector<Vec2>& waypoints) {
  if (waypoints.size() < 2) throw InvalidPath("reference path: need at least 2 waypoints");
  const int m = static_cast<int>(waypoints.size());
  std::vector<double> chord(m, 0.0);  // cumulative chordal parameter
  for (int i = 1; i < m; ++i) {
    const double d = (waypoints[i] - waypoints[i - 1]).norm();
    if (d < 1e-9)
      throw InvalidPath("reference path: duplicate consecutive waypoints at index " +
                        std::to_string(i));
    chord[i] = chord[i - 1] + d;
  }

  // Natural cubic spline per axis on the chord parameter: solve the
  // tridiagonal system for second derivatives.
  const int n = m - 1;  // segments
  Eigen::MatrixX2d m2 = Eigen::MatrixX2d::Zero(m, 2);
  if (m > 2) {
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m - 2, m - 2);
    Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(m - 2, 2);
    for (int i = 1; i < m - 1; ++i) {
      const double h0 = chord[i] - chord[i - 1];
      const double h1 = chord[i + 1] - chord[i];
      const int row = i - 1;
      if (row > 0) tri(row, row - 1) = h0;
      tri(row, row) = 2.0 * (h0 + h1);
      if (row < m - 3) tri(row, row + 1) = h1;
      for (int axis = 0; axis < 2; ++axis) {
        rhs(row, axis) = 6.0 * ((waypoints[i + 1](axis) - waypoints[i](axis)) / h1 -
                                (waypoints[i](axis) - waypoints[i - 1](axis)) / h0);
      }
    }
    const Eigen::MatrixX2d sol = tri.partialPivLu().solve(rhs);
    m2.middleRows(1, m - 2) = sol;
  }

  ReferencePath path;
  path.waypoints_ = waypoints;
  path.segments_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double h = chord[i + 1] - chord[i];
    Segment& seg = path.segments_[i];
    seg.h = h;
    for (int axis = 0; axis < 2; ++axis) {
      const double y0 = waypoints[i](axis), y1 = waypoints[i + 1](axis);
      const double k0 = m2(i, axis), k1 = m2(i + 1, axis);
      seg.a(axis) = y0;
      seg.b(axis) = (y1 - y0) / h - h * (2.0 * k0 + k1) / 6.0;
      seg.c(axis) = k0 / 2.0;
      seg.d(axis) = (k1 - k0) / (6.0 * h);
    }
  }

  // Arc-length tables.
  path.sub_s_.resize(n);
  path.sub_arc_.resize(n);
  path.seg_arc_start_.resize(n + 1, 0.0);
  double arc = 0.0;
  for (int i = 0; i < n; ++i) {
    path.seg_arc_start_[i] = arc;
    auto& ss = path.sub_s_[i];
    auto& sa = path.sub_arc_[i];
    ss.resize(kSubSamples + 1);
    sa.resize(kSubSamples + 1);
    const double h = path.segments_[i].h;
    double local = 0.0;
    ss[0] = 0.0;
    sa[0] = 0.0;
    for (int k = 1; k <= kSubSamples; ++k) {
      const double s0 = h * (k - 1) / kSubSamples;
      const double s1 = h * k / kSubSamples;
      const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
      double piece = 0.0;
      for (int g = 0; g < 8; ++g)
        piece += kGaussWeights[g] * path.eval_d1(i, mid + half * kGaussNodes[g]).norm();
      piece *= half;
      local += piece;
      ss[k] = s1;
      sa[k] = local;
    }
    arc += local;
  }
  path.seg_arc_start_[n] = arc;
  path.total_length_ = arc;
  path.waypoint_arcs_.resize(m);
  for (int i = 0; i <= n; ++i) path.waypoint_arcs_[i] = path.seg_arc_start_[i];
  return path;
}

Vec2 ReferencePath::eval_local(int seg, double s) const {
  const Segment& g = segments_[seg];
  return g.a + s * (g.b + s * (g.c + s * g.d));
}

Vec2 ReferencePath::eval_d1(int seg, double s) const {
  const Segment& g = segments_[seg];
  return g.b + s * (2.0 * g.c + 3.0 * s * g.d);
}

Vec2 ReferencePath::eval_d2(int seg, double s) const {
  const Segment& g = segments_[seg];
  return 2.0 * g.c + 6.0 * s * g.d;
}

double ReferencePath::arc_from_segment_start(int seg, double s) const {
  const auto& ss = sub_s_[seg];
  const auto& sa = sub_arc_[seg];
  const auto it = std::upper_bound(ss.begin(), ss.end(), s);
  const int hi = std::clamp(static_cast<int>(it - ss.begin()), 1, kSubSamples);
  const double s0 = ss[hi - 1];
  const double mid = 0.5 * (s0 + s), half = 0.5 * (s - s0);
  double piece = 0.0;
  for (int g = 0; g < 8; ++g)
    piece += kGaussWeights[g] * eval_d1(seg, mid + half * kGaussNodes[g]).norm();
  return sa[hi - 1] + piece * half;
}

std::pair<int, double> ReferencePath::locate(double theta) const {
  const int n = static_cast<int>(segments_.size());
  theta = std::clamp(theta, 0.0, total_length_);
  const auto seg_it = std::upper_bound(seg_arc_start_.begin(), seg_arc_start_.end() - 1, theta);
  const int seg = std::clamp(static_cast<int>(seg_it - seg_arc_start_.begin()) - 1, 0, n - 1);
  const double local_arc = theta - seg_arc_start_[seg];

  const auto& sa = sub_arc_[seg];
  const auto& ss = sub_s_[seg];
  const auto it = std::upper_bound(sa.begin(), sa.end(), local_arc);
  const int hi = std::clamp(static_cast<int>(it - sa.begin()), 1, kSubSamples);
  const double a0 = sa[hi - 1], a1 = sa[hi];
  double s = ss[hi - 1];
  if (a1 > a0) s += (ss[hi] - ss[hi - 1]) * (local_arc - a0) / (a1 - a0);
  // Newton refinement on arc(s) = local_arc; d(arc)/ds = |p'(s)|.
  for (int iter = 0; iter < 3; ++iter) {
    const double speed = eval_d1(seg, s).norm();
    if (speed < 1e-12) break;
    const double err = arc_from_segment_start(seg, s) - local_arc;
    s -= err / speed;
    s = std::clamp(s, 0.0, segments_[seg].h);
  }
  return {seg, s};
}

PathSample ReferencePath::sample(double theta) const {
  const double clamped = std::clamp(theta, 0.0, total_length_);
  const auto [seg, s] = locate(clamped);
  PathSample out;
  out.theta = clamped;
  out.point = eval_local(seg, s);
  const Vec2 d1 = eval_d1(seg, s);
  const Vec2 d2 = eval_d2(seg, s);
  const double speed = d1.norm();
  out.tangent = speed > 1e-12 ? Vec2(d1 / speed) : Vec2(1.0, 0.0);
  out.tangent_heading = wrap_angle(std::atan2(out.tangent.y(), out.tangent.x()));
  const double denom = speed * speed * speed;
  out.curvature = denom > 1e-12 ? cross2(d1, d2) / denom : 0.0;
  return out;
}

ReferencePath::ContourLag ReferencePath::contour_lag_error(double theta,
                                                           const Vec2& position) const {
  const PathSample s = sample(theta);
  const Vec2 d = position - s.point;
  return ContourLag{cross2(s.tangent, d), s.tangent.dot(d)};
}

double ReferencePath::project_progress(const Vec2& position, std::optional<double> hint,
                                       double window) const {
  double lo = 0.0, hi = total_length_;
  double best_theta = 0.0;
  double best_d2 = std::numeric_limits<double>::infinity();
  if (hint) {
    lo = std::clamp(*hint - window, 0.0, total_length_);
    hi = std::clamp(*hint + window, 0.0, total_length_);
  }
  const int grid = hint ? 64 : 1000;
  for (int i = 0; i <= grid; ++i) {
    const double theta = lo + (hi - lo) * i / grid;
    const double d2 = (sample(theta).point - position).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best_theta = theta;
    }
  }
  // Golden-section refinement around the best grid cell.
  const double cell = (hi - lo) / grid;
  double a = std::max(lo, best_theta - cell);
  double b = std::min(hi, best_theta + cell);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = (sample(x1).point - position).squaredNorm();
  double f2 = (sample(x2).point - position).squaredNorm();
  while (b - a > 1e-7) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = (sample(x1).point - position).squaredNorm();
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = (sample(x2).point - position).squaredNorm();
    }
  }
  return 0.5 * (a + b);
}

}  // namespace canal
