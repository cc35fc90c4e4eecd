#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geonet {

// Position of a member in the unit square.
//
// Aggregate initialization does not validate; code that ingests external
// coordinates goes through checked() (throws DomainError) or clamped().
struct Point {
  double x = 0.0;
  double y = 0.0;

  static Point checked(double x, double y);
  static Point clamped(double x, double y);

  friend bool operator==(const Point&, const Point&) = default;
};

bool in_unit_square(const Point& p);

enum class Metric { Torus, BoundedSquare };

const char* to_string(Metric m);
Metric metric_from_string(const char* name);

// Euclidean distance; Torus uses per-axis minimum image.
double distance(const Point& a, const Point& b, Metric metric);
double distance_squared(const Point& a, const Point& b, Metric metric);

// Closed-ball membership distance(a, b) <= r. Every radius test in the
// library goes through this so that boundary pairs are classified identically.
inline bool within_radius(const Point& a, const Point& b, double r, Metric metric) {
  return distance(a, b, metric) <= r;
}

// Area of the closed ball B(x, r) inside the domain. Torus: pi r^2.
// BoundedSquare: exact area of the disk / unit-square intersection.
// Throws DomainError unless 0 < r <= 1/2.
double ball_volume(const Point& x, double r, Metric metric);

// Area of the part of a radius-r disk lying beyond a chord at distance d from
// its center (0 when d >= r).
double circular_segment_area(double r, double d);

// Area of the part of a radius-r disk centered at the origin lying in the
// quadrant {u >= a, v >= b}, for a, b >= 0.
double disk_quadrant_area(double r, double a, double b);

// Uniform grid over [0,1]^2 for fixed-radius queries.
//
// The grid has m = floor(1 / cell_size) cells per axis, so each cell is at
// least cell_size wide and a query of radius <= cell_size only touches the
// 3x3 block around the query cell (wrapped under Torus). Points are stored in
// cell-sorted order; the index is immutable after construction.
class SpatialIndex {
 public:
  SpatialIndex(std::span<const Point> points, double cell_size, Metric metric);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double cell_size() const { return cell_size_; }
  Metric metric() const { return metric_; }
  std::size_t cells_per_axis() const { return cells_per_axis_; }
  const Point& point(std::size_t id) const { return points_[id]; }
  // Cell coordinates (cx, cy) holding point `id`.
  std::pair<std::size_t, std::size_t> cell_of(std::size_t id) const;
  std::span<const std::uint32_t> cell_members(std::size_t cx, std::size_t cy) const;

  // Ids within distance r of x (closed ball), ascending. Throws
  // ContractViolation when r > cell_size().
  std::vector<std::size_t> neighbors_within(const Point& x, double r) const;

  // Calls visit(id) for every indexed point within distance r of x, in
  // unspecified order. Stops early and returns true when visit returns true.
  template <typename Visitor>
  bool any_within(const Point& x, double r, Visitor&& visit) const;

 private:
  std::size_t cell_coord(double v) const;
  void check_radius(double r) const;
  // Distinct neighboring cell coordinates along one axis around c.
  std::size_t axis_neighbors(std::size_t c, std::size_t out[3]) const;

  std::vector<Point> points_;
  double cell_size_;
  Metric metric_;
  std::size_t cells_per_axis_;
  std::vector<std::uint32_t> cell_start_;  // size m*m + 1
  std::vector<std::uint32_t> sorted_ids_;
};

template <typename Visitor>
bool SpatialIndex::any_within(const Point& x, double r, Visitor&& visit) const {
  check_radius(r);
  if (points_.empty()) return false;
  std::size_t xs[3];
  std::size_t ys[3];
  const std::size_t nx = axis_neighbors(cell_coord(x.x), xs);
  const std::size_t ny = axis_neighbors(cell_coord(x.y), ys);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::uint32_t id : cell_members(xs[i], ys[j])) {
        if (within_radius(x, points_[id], r, metric_) && visit(std::size_t{id})) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace geonet
