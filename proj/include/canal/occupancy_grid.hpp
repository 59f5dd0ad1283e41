#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "canal/geometry.hpp"

namespace canal {

class GridError : public std::runtime_error {
 public:
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

/// Separating halfplane: feasible side is A . p - b < 0; ||A|| = 1.
struct LinearConstraint {
  Vec2 A{1.0, 0.0};
  double b = 0.0;
};

/// Eq.-style residual A . p - b + r_disc + delta; feasible iff <= 0.
inline double static_constraint_residual(const LinearConstraint& c, const Vec2& p, double r_disc,
                                         double delta) {
  return c.A.dot(p) - c.b + r_disc + delta;
}

// Boolean occupancy grid with precomputed connected components (8-connected
// occupied cells) and their convex hulls. Cell (0,0) sits at `origin`; cell
// centers are origin + (ix + 0.5, iy + 0.5) * resolution, iy increasing with
// world y. Immutable after construction.
class OccupancyGrid {
 public:
  struct Component {
    std::vector<Vec2> cell_centers;
    std::vector<Vec2> hull;  // CCW convex hull of the cell centers
  };

  OccupancyGrid(double resolution, Vec2 origin, int width, int height,
                std::vector<std::uint8_t> cells);

  /// P5 PGM (0 = occupied, 255 = free, threshold 128; top row first) plus a
  /// JSON sidecar {"resolution": r, "origin": [x, y]}.
  static OccupancyGrid from_pgm(const std::string& pgm_path, const std::string& meta_path);

  double resolution() const { return resolution_; }
  const Vec2& origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool occupied(int ix, int iy) const { return cells_[static_cast<size_t>(iy) * width_ + ix] != 0; }
  bool in_bounds(const Vec2& p) const;
  /// True iff the containing cell is occupied; p must be in bounds.
  bool occupied_at(const Vec2& p) const;
  Vec2 cell_center(int ix, int iy) const {
    return origin_ + resolution_ * Vec2(ix + 0.5, iy + 0.5);
  }
  /// Distance from p to the closest occupied cell rectangle; +inf when empty.
  double distance_to_occupied(const Vec2& p) const;

  const std::vector<Component>& components() const { return components_; }

 private:
  void build_components();

  double resolution_;
  Vec2 origin_;
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
  std::vector<Component> components_;
};

// Halfplane constraints separating a footprint disc from the nearest occupied
// convex components (at most max_constraints). Throws GridError when the disc
// position is out of bounds or inside an occupied cell.
std::vector<LinearConstraint> static_constraints_for(const OccupancyGrid& grid,
                                                     const Vec2& disc_position, double r_disc,
                                                     double delta, int max_constraints);

}  // namespace canal
