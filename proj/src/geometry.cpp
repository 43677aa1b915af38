#include "typcell/geometry.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace typcell {

double shoelace_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(ring[i], ring[(i + 1) % n]);
  }
  return 0.5 * twice;
}

CellPolygon::CellPolygon(std::vector<Point2> ccw_vertices) : vertices_(std::move(ccw_vertices)) {
  refresh();
}

CellPolygon CellPolygon::square(Point2 centre, double half_width) {
  const double h = half_width;
  return CellPolygon({{centre.x - h, centre.y - h},
                      {centre.x + h, centre.y - h},
                      {centre.x + h, centre.y + h},
                      {centre.x - h, centre.y + h}});
}

double CellPolygon::max_distance_from(Point2 p) const {
  double best = 0.0;
  for (const Point2 &v : vertices_) {
    best = std::max(best, norm2(v - p));
  }
  return std::sqrt(best);
}

void CellPolygon::clip(Point2 normal, double offset) {
  const std::size_t n = vertices_.size();
  if (n == 0) {
    return;
  }
  std::vector<Point2> out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 cur = vertices_[i];
    const Point2 nxt = vertices_[(i + 1) % n];
    const double sc = dot(normal, cur) - offset;
    const double sn = dot(normal, nxt) - offset;
    if (sc <= 0.0) {
      out.push_back(cur);
    }
    if ((sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  vertices_ = std::move(out);
  refresh();
}

void CellPolygon::clip_bisector(Point2 nucleus, Point2 other) {
  // |y - nucleus|^2 <= |y - other|^2  <=>  2 (other - nucleus).y <= |other|^2 - |nucleus|^2
  const Point2 normal = other - nucleus;
  const double offset = 0.5 * (norm2(other) - norm2(nucleus));
  clip(normal, offset);
}

bool CellPolygon::contains(Point2 p, double slack) const {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[(i + 1) % n];
    const Point2 edge = b - a;
    if (cross(edge, p - a) < -slack * norm(edge)) {
      return false;
    }
  }
  return true;
}

bool CellPolygon::is_convex() const {
  const std::size_t n = vertices_.size();
  if (n < 3) {
    return false;
  }
  const double scale = std::max(box_.hi.x - box_.lo.x, box_.hi.y - box_.lo.y);
  const double tol = 1e-12 * scale * scale;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i];
    const Point2 b = vertices_[(i + 1) % n];
    const Point2 c = vertices_[(i + 2) % n];
    if (cross(b - a, c - b) < -tol) {
      return false;
    }
  }
  return true;
}

Point2 CellPolygon::vertex_mean() const {
  Point2 sum{};
  for (const Point2 &v : vertices_) {
    sum = sum + v;
  }
  const double n = static_cast<double>(vertices_.size());
  return {sum.x / n, sum.y / n};
}

void CellPolygon::refresh() {
  area_ = shoelace_area(vertices_);
  if (vertices_.empty()) {
    box_ = {};
    return;
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  box_ = {{inf, inf}, {-inf, -inf}};
  for (const Point2 &v : vertices_) {
    box_.lo.x = std::min(box_.lo.x, v.x);
    box_.lo.y = std::min(box_.lo.y, v.y);
    box_.hi.x = std::max(box_.hi.x, v.x);
    box_.hi.y = std::max(box_.hi.y, v.y);
  }
}

} // namespace typcell
