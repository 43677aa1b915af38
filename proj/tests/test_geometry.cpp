#include <doctest.h>

#include <vector>

#include "typcell/geometry.hpp"

using namespace typcell;

TEST_SUITE("geometry") {

TEST_CASE("square and shoelace") {
  const auto sq = CellPolygon::square({1.0, -1.0}, 2.0);
  CHECK(sq.area() == doctest::Approx(16.0));
  CHECK(sq.is_convex());
  CHECK(sq.contains({1.0, -1.0}));
  CHECK_FALSE(sq.contains({3.5, -1.0}));
  CHECK(sq.bounding_box().lo.x == doctest::Approx(-1.0));
  CHECK(sq.bounding_box().hi.y == doctest::Approx(1.0));
  const std::vector<Point2> cw = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(shoelace_area(cw) == doctest::Approx(-1.0));
}

TEST_CASE("half-plane clip") {
  auto sq = CellPolygon::square({0.0, 0.0}, 1.0);
  sq.clip({1.0, 0.0}, 0.0); // keep x <= 0
  CHECK(sq.area() == doctest::Approx(2.0));
  CHECK(sq.is_convex());
  CHECK(sq.max_distance_from({0.0, 0.0}) == doctest::Approx(std::sqrt(2.0)));
  sq.clip({0.0, 1.0}, -5.0); // nothing survives
  CHECK(sq.empty());
}

TEST_CASE("bisector clipping builds a Voronoi cell") {
  auto cell = CellPolygon::square({0.0, 0.0}, 10.0);
  for (const Point2 p : {Point2{1, 0}, Point2{-1, 0}, Point2{0, 1}, Point2{0, -1}}) {
    cell.clip_bisector({0.0, 0.0}, p);
  }
  CHECK(cell.area() == doctest::Approx(1.0));
  CHECK(cell.vertices().size() == 4);
  CHECK(cell.contains({0.49, 0.49}));
  CHECK_FALSE(cell.contains({0.51, 0.0}));
  const Point2 c = cell.vertex_mean();
  CHECK(std::abs(c.x) < 1e-12);
  CHECK(std::abs(c.y) < 1e-12);
}

TEST_CASE("clip keeps a triangle exact") {
  auto sq = CellPolygon::square({0.0, 0.0}, 1.0);
  sq.clip({1.0, 1.0}, 0.0); // keep x + y <= 0
  CHECK(sq.area() == doctest::Approx(2.0));
  CHECK(sq.vertices().size() == 3);
}

}
