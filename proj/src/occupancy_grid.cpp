#include "canal/occupancy_grid.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace canal {

OccupancyGrid::OccupancyGrid(double resolution, Vec2 origin, int width, int height,
                             std::vector<std::uint8_t> cells)
    : resolution_(resolution), origin_(origin), width_(width), height_(height),
      cells_(std::move(cells)) {
  if (resolution_ <= 0.0) throw GridError("occupancy grid: resolution must be positive");
  if (width_ <= 0 || height_ <= 0) throw GridError("occupancy grid: empty dimensions");
  if (cells_.size() != static_cast<size_t>(width_) * height_)
    throw GridError("occupancy grid: cell array size mismatch");
  build_components();
}

bool OccupancyGrid::in_bounds(const Vec2& p) const {
  const Vec2 rel = (p - origin_) / resolution_;
  return rel.x() >= 0.0 && rel.y() >= 0.0 && rel.x() < width_ && rel.y() < height_;
}

bool OccupancyGrid::occupied_at(const Vec2& p) const {
  if (!in_bounds(p)) throw GridError("occupancy grid: query out of bounds");
  const Vec2 rel = (p - origin_) / resolution_;
  const int ix = std::min(static_cast<int>(rel.x()), width_ - 1);
  const int iy = std::min(static_cast<int>(rel.y()), height_ - 1);
  return occupied(ix, iy);
}

double OccupancyGrid::distance_to_occupied(const Vec2& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < height_; ++iy) {
    for (int ix = 0; ix < width_; ++ix) {
      if (!occupied(ix, iy)) continue;
      const Vec2 lo = origin_ + resolution_ * Vec2(ix, iy);
      const Vec2 hi = lo + Vec2(resolution_, resolution_);
      const double dx = std::max({lo.x() - p.x(), 0.0, p.x() - hi.x()});
      const double dy = std::max({lo.y() - p.y(), 0.0, p.y() - hi.y()});
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

namespace {

// Andrew monotone chain; returns CCW hull (may be a point or segment).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  const int n = static_cast<int>(pts.size());
  if (n <= 2) return pts;
  std::vector<Vec2> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const int lower = k + 1;
  for (int i = n - 2; i >= 0; --i) {
    while (k >= lower && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Vec2 closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-18) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

bool inside_convex(const std::vector<Vec2>& hull, const Vec2& p) {
  if (hull.size() < 3) return false;
  for (size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    if (cross2(b - a, p - a) < 0.0) return false;  // CCW hull
  }
  return true;
}

}  // namespace

void OccupancyGrid::build_components() {
  std::vector<int> label(cells_.size(), -1);
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int iy = 0; iy < height_; ++iy) {
    for (int ix = 0; ix < width_; ++ix) {
      const size_t idx = static_cast<size_t>(iy) * width_ + ix;
      if (cells_[idx] == 0 || label[idx] >= 0) continue;
      const int id = next++;
      components_.emplace_back();
      stack.clear();
      stack.emplace_back(ix, iy);
      label[idx] = id;
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        components_[id].cell_centers.push_back(cell_center(cx, cy));
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= width_ || ny >= height_) continue;
            const size_t nidx = static_cast<size_t>(ny) * width_ + nx;
            if (cells_[nidx] == 0 || label[nidx] >= 0) continue;
            label[nidx] = id;
            stack.emplace_back(nx, ny);
          }
        }
      }
    }
  }
  for (auto& comp : components_) comp.hull = convex_hull(comp.cell_centers);
}

OccupancyGrid OccupancyGrid::from_pgm(const std::string& pgm_path, const std::string& meta_path) {
  std::ifstream in(pgm_path, std::ios::binary);
  if (!in) throw GridError("occupancy grid: cannot open " + pgm_path);
  auto next_token = [&in, &pgm_path]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw GridError("occupancy grid: truncated PGM header in " + pgm_path);
  };
  if (next_token() != "P5") throw GridError("occupancy grid: " + pgm_path + " is not binary PGM (P5)");
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
    throw GridError("occupancy grid: bad PGM dimensions in " + pgm_path);
  in.get();  // single whitespace after maxval
  std::vector<std::uint8_t> raw(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw GridError("occupancy grid: truncated PGM raster in " + pgm_path);

  std::ifstream meta_in(meta_path);
  if (!meta_in) throw GridError("occupancy grid: cannot open " + meta_path);
  nlohmann::json meta;
  meta_in >> meta;
  const double res = meta.at("resolution").get<double>();
  const Vec2 origin(meta.at("origin").at(0).get<double>(), meta.at("origin").at(1).get<double>());

  // PGM stores the top row first; grid row 0 is the bottom.
  std::vector<std::uint8_t> cells(raw.size());
  for (int iy = 0; iy < h; ++iy) {
    for (int ix = 0; ix < w; ++ix) {
      const std::uint8_t v = raw[static_cast<size_t>(h - 1 - iy) * w + ix];
      cells[static_cast<size_t>(iy) * w + ix] = v < 128 ? 1 : 0;
    }
  }
  return OccupancyGrid(res, origin, w, h, std::move(cells));
}

std::vector<LinearConstraint> static_constraints_for(const OccupancyGrid& grid,
                                                     const Vec2& disc_position, double r_disc,
                                                     double delta, int max_constraints) {
  (void)r_disc;
  (void)delta;  // margins enter the residual, not the halfplane itself
  if (!grid.in_bounds(disc_position)) throw GridError("static constraints: position out of bounds");
  if (grid.occupied_at(disc_position)) throw GridError("static constraints: position in collision");

  struct Candidate {
    double dist;
    Vec2 closest;
    int component;
  };
  std::vector<Candidate> candidates;
  const auto& comps = grid.components();
  for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci) {
    const auto& comp = comps[ci];
    Vec2 closest;
    if (inside_convex(comp.hull, disc_position)) {
      // Hull over-approximates a non-convex component; fall back to the
      // nearest occupied cell center (the query cell itself is free).
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : comp.cell_centers) {
        const double d = (c - disc_position).squaredNorm();
        if (d < best) {
          best = d;
          closest = c;
        }
      }
    } else if (comp.hull.size() == 1) {
      closest = comp.hull[0];
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < comp.hull.size(); ++i) {
        const Vec2 a = comp.hull[i];
        const Vec2 b = comp.hull[(i + 1) % std::max<size_t>(comp.hull.size(), 2)];
        const Vec2 q = closest_point_on_segment(a, b, disc_position);
        const double d = (q - disc_position).squaredNorm();
        if (d < best) {
          best = d;
          closest = q;
        }
      }
    }
    const double dist = (closest - disc_position).norm();
    if (dist > 1e-9) candidates.push_back({dist, closest, ci});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.component < b.component);
  });
  std::vector<LinearConstraint> out;
  const int n_emit = std::min<int>(max_constraints, static_cast<int>(candidates.size()));
  out.reserve(n_emit);
  for (int i = 0; i < n_emit; ++i) {
    const Vec2 dir = (candidates[i].closest - disc_position).normalized();
    out.push_back(LinearConstraint{dir, dir.dot(candidates[i].closest)});
  }
  return out;
}

}  // namespace canal
