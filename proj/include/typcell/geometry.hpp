#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace typcell {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point2 p) { return dot(p, p); }
inline double norm(Point2 p) { return std::sqrt(norm2(p)); }

struct BoundingBox {
  Point2 lo;
  Point2 hi;
};

/// Signed shoelace area; positive for counter-clockwise rings.
double shoelace_area(std::span<const Point2> ring);

/// Convex polygon stored as a counter-clockwise vertex ring.
class CellPolygon {
public:
  CellPolygon() = default;
  explicit CellPolygon(std::vector<Point2> ccw_vertices);

  /// Axis-aligned square of half-width `half_width` centred at `centre`.
  static CellPolygon square(Point2 centre, double half_width);

  [[nodiscard]] const std::vector<Point2> &vertices() const noexcept { return vertices_; }
  [[nodiscard]] double area() const noexcept { return area_; }
  [[nodiscard]] const BoundingBox &bounding_box() const noexcept { return box_; }
  [[nodiscard]] bool empty() const noexcept { return vertices_.size() < 3; }

  /// Largest vertex distance from `p`.
  [[nodiscard]] double max_distance_from(Point2 p) const;

  /// Keeps the part with dot(normal, y) <= offset (Sutherland-Hodgman on a
  /// convex ring).
  void clip(Point2 normal, double offset);

  /// Keeps the points at least as close to `nucleus` as to `other`.
  void clip_bisector(Point2 nucleus, Point2 other);

  [[nodiscard]] bool contains(Point2 p, double slack = 0.0) const;
  [[nodiscard]] bool is_convex() const;
  [[nodiscard]] Point2 vertex_mean() const;

private:
  void refresh();

  std::vector<Point2> vertices_;
  double area_ = 0.0;
  BoundingBox box_{};
};

} // namespace typcell
