#include "geonet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

#include "geonet/errors.hpp"

namespace geonet {

Point Point::checked(double x, double y) {
  const Point p{x, y};
  if (!in_unit_square(p)) {
    throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) +
                      ") outside [0,1]^2");
  }
  return p;
}

Point Point::clamped(double x, double y) {
  if (std::isnan(x) || std::isnan(y)) throw DomainError("point coordinate is NaN");
  return {std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0)};
}

bool in_unit_square(const Point& p) {
  return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
}

const char* to_string(Metric m) {
  return m == Metric::Torus ? "torus" : "bounded";
}

Metric metric_from_string(const char* name) {
  if (std::strcmp(name, "torus") == 0) return Metric::Torus;
  if (std::strcmp(name, "bounded") == 0) return Metric::BoundedSquare;
  throw DomainError(std::string("unknown metric '") + name + "' (expected torus|bounded)");
}

namespace {

double axis_delta(double a, double b, Metric metric) {
  const double d = std::fabs(a - b);
  return metric == Metric::Torus ? std::min(d, 1.0 - d) : d;
}

}  // namespace

double distance_squared(const Point& a, const Point& b, Metric metric) {
  const double dx = axis_delta(a.x, b.x, metric);
  const double dy = axis_delta(a.y, b.y, metric);
  return dx * dx + dy * dy;
}

double distance(const Point& a, const Point& b, Metric metric) {
  return std::sqrt(distance_squared(a, b, metric));
}

double circular_segment_area(double r, double d) {
  if (d >= r) return 0.0;
  if (d <= -r) return std::numbers::pi * r * r;
  return r * r * std::acos(d / r) - d * std::sqrt(r * r - d * d);
}

double disk_quadrant_area(double r, double a, double b) {
  if (a * a + b * b >= r * r) return 0.0;
  // Integrate the vertical extent sqrt(r^2 - u^2) - b for u in [a, sqrt(r^2 - b^2)].
  const auto antiderivative = [r](double u) {
    const double root = std::sqrt(std::max(0.0, r * r - u * u));
    return 0.5 * (u * root + r * r * std::asin(std::clamp(u / r, -1.0, 1.0)));
  };
  const double u_max = std::sqrt(r * r - b * b);
  return antiderivative(u_max) - antiderivative(a) - b * (u_max - a);
}

double ball_volume(const Point& x, double r, Metric metric) {
  if (!(r > 0.0 && r <= 0.5)) {
    throw DomainError("ball_volume: radius " + std::to_string(r) + " outside (0, 1/2]");
  }
  const double full = std::numbers::pi * r * r;
  if (metric == Metric::Torus) return full;

  // Inclusion-exclusion over the four edges. With r <= 1/2 a disk centered in
  // the square crosses at most one vertical and one horizontal edge, so only
  // the corner shared by those two can contribute a double-subtracted piece.
  const double left = x.x;
  const double right = 1.0 - x.x;
  const double bottom = x.y;
  const double top = 1.0 - x.y;
  double area = full - circular_segment_area(r, left) - circular_segment_area(r, right) -
                circular_segment_area(r, bottom) - circular_segment_area(r, top);
  for (double h : {left, right}) {
    for (double v : {bottom, top}) area += disk_quadrant_area(r, h, v);
  }
  return std::clamp(area, 0.25 * full, full);
}

SpatialIndex::SpatialIndex(std::span<const Point> points, double cell_size, Metric metric)
    : points_(points.begin(), points.end()), cell_size_(cell_size), metric_(metric) {
  if (!(cell_size > 0.0 && cell_size <= 1.0)) {
    throw DomainError("SpatialIndex: cell size " + std::to_string(cell_size) +
                      " outside (0, 1]");
  }
  const double per_axis = std::floor(1.0 / cell_size);
  // Cap keeps the cell table bounded for tiny radii.
  cells_per_axis_ = static_cast<std::size_t>(std::clamp(per_axis, 1.0, 4096.0));
  const std::size_t m = cells_per_axis_;
  std::vector<std::uint32_t> cell_of_point(points_.size());
  cell_start_.assign(m * m + 1, 0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const std::size_t c = cell_coord(points_[i].x) * m + cell_coord(points_[i].y);
    cell_of_point[i] = static_cast<std::uint32_t>(c);
    ++cell_start_[c + 1];
  }
  for (std::size_t c = 0; c < m * m; ++c) cell_start_[c + 1] += cell_start_[c];
  sorted_ids_.resize(points_.size());
  std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    sorted_ids_[cursor[cell_of_point[i]]++] = static_cast<std::uint32_t>(i);
  }
}

std::size_t SpatialIndex::cell_coord(double v) const {
  const double m = static_cast<double>(cells_per_axis_);
  double c = std::clamp(std::floor(v * m), 0.0, m);
  // On the torus the edge 1 is the edge 0; in the square it belongs to the last cell.
  if (c == m) c = metric_ == Metric::Torus ? 0.0 : m - 1.0;
  return static_cast<std::size_t>(c);
}

std::pair<std::size_t, std::size_t> SpatialIndex::cell_of(std::size_t id) const {
  return {cell_coord(points_[id].x), cell_coord(points_[id].y)};
}

std::span<const std::uint32_t> SpatialIndex::cell_members(std::size_t cx, std::size_t cy) const {
  const std::size_t c = cx * cells_per_axis_ + cy;
  return {sorted_ids_.data() + cell_start_[c], sorted_ids_.data() + cell_start_[c + 1]};
}

void SpatialIndex::check_radius(double r) const {
  if (r > cell_size_) {
    throw ContractViolation("query radius " + std::to_string(r) + " exceeds index cell size " +
                            std::to_string(cell_size_));
  }
  if (!(r >= 0.0)) throw DomainError("query radius must be nonnegative");
}

std::size_t SpatialIndex::axis_neighbors(std::size_t c, std::size_t out[3]) const {
  const std::size_t m = cells_per_axis_;
  std::size_t n = 0;
  out[n++] = c;
  if (metric_ == Metric::Torus) {
    if (m >= 2) out[n++] = (c + 1) % m;
    if (m >= 3) out[n++] = (c + m - 1) % m;
  } else {
    if (c + 1 < m) out[n++] = c + 1;
    if (c >= 1) out[n++] = c - 1;
  }
  return n;
}

std::vector<std::size_t> SpatialIndex::neighbors_within(const Point& x, double r) const {
  std::vector<std::size_t> ids;
  any_within(x, r, [&ids](std::size_t id) {
    ids.push_back(id);
    return false;
  });
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace geonet
