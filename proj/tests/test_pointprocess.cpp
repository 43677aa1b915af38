#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "typcell/errors.hpp"
#include "typcell/pointprocess.hpp"

using namespace typcell;

namespace {

constexpr double kPi = std::numbers::pi;

PointSet points2(std::initializer_list<Point2> pts) {
  PointSet s;
  for (const auto p : pts) {
    s.push_back(p, 2);
  }
  return s;
}

} // namespace

TEST_SUITE("pointprocess") {

TEST_CASE("window defaults and validation") {
  const auto w2 = SimWindow::default_for(2, 1.0);
  CHECK(w2.measure() == doctest::Approx(400.0));
  const auto w1 = SimWindow::default_for(1, 2.0);
  CHECK(w1.radius == doctest::Approx(12.5));
  CHECK_NOTHROW(w1.validate(2.0));
  CHECK_THROWS_AS((SimWindow{2, 1.0}.validate(1.0)), ParameterError);
  CHECK_THROWS_AS((SimWindow{3, 10.0}.validate(1.0)), ParameterError);
  CHECK_THROWS_AS(SimWindow::default_for(2, 0.0), ParameterError);
}

TEST_CASE("ordered PPP: sorted, inside the window, right mean count") {
  const SimWindow w{2, 8.0};
  double total = 0.0;
  const int runs = 2000;
  for (int i = 0; i < runs; ++i) {
    Engine eng = make_substream({11, static_cast<std::uint64_t>(i)});
    const PointSet p = sample_ppp_ordered(w, 0.5, eng, {1.0, 2.0});
    double prev = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double d = norm(p.at(k) - Point2{1.0, 2.0});
      REQUIRE(d >= prev);
      REQUIRE(d <= w.radius);
      prev = d;
    }
    total += static_cast<double>(p.size());
  }
  const double mean = 0.5 * w.measure();
  CHECK(std::abs(total / runs - mean) < 4.0 * std::sqrt(mean / runs));
}

TEST_CASE("ordered PPP respects the inner radius; 1-D sides merge by distance") {
  Engine eng = make_substream({12, 0});
  const PointSet p = sample_ppp_ordered({2, 10.0}, 1.0, eng, {}, 2.5);
  REQUIRE(!p.empty());
  CHECK(norm(p.at(0)) > 2.5);

  Engine e1 = make_substream({12, 1});
  const PointSet q = sample_ppp_ordered({1, 50.0}, 1.0, e1);
  CHECK(q.y.empty());
  bool left = false;
  bool right = false;
  for (std::size_t k = 1; k < q.size(); ++k) {
    REQUIRE(std::abs(q.x[k]) >= std::abs(q.x[k - 1]));
    left |= q.x[k] < 0.0;
    right |= q.x[k] > 0.0;
  }
  CHECK(left);
  CHECK(right);
}

TEST_CASE("uniform PPP count") {
  double total = 0.0;
  for (int i = 0; i < 500; ++i) {
    Engine eng = make_substream({13, static_cast<std::uint64_t>(i)});
    total += static_cast<double>(sample_ppp({1, 30.0}, 2.0, eng).size());
  }
  CHECK(std::abs(total / 500.0 - 120.0) < 4.0 * std::sqrt(120.0 / 500.0));
}

TEST_CASE("1-D cells") {
  const std::vector<double> pts = {3.0, -1.0, 7.0, -4.0};
  const auto t = typical_cell_1d(pts);
  REQUIRE(t);
  CHECK(t->lo == doctest::Approx(-0.5));
  CHECK(t->hi == doctest::Approx(1.5));
  const auto c = crofton_cell_1d(pts); // nucleus -1: neighbours -4 and 3
  REQUIRE(c);
  CHECK(c->lo == doctest::Approx(-2.5));
  CHECK(c->hi == doctest::Approx(1.0));
  const std::vector<double> one_sided = {1.0, 2.0};
  CHECK_FALSE(typical_cell_1d(one_sided));
}

TEST_CASE("2-D typical cell of a square lattice") {
  const PointSet lattice = points2({{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}, {2, 0}});
  const auto cell = typical_cell_2d(lattice, 5.0);
  REQUIRE(cell);
  CHECK(cell->area() == doctest::Approx(1.0));
  // The same configuration seen through a window too small to certify closure.
  CHECK_FALSE(typical_cell_2d(lattice, 1.2));
  // Points only on one side never close the cell.
  CHECK_FALSE(typical_cell_2d(points2({{1, 0}, {2, 0}}), 5.0));
}

TEST_CASE("2-D Crofton cell contains the origin") {
  const PointSet pts = points2({{0.2, 0.1}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2, 2}, {-2, -2}, {2, -2}, {-2, 2}});
  const auto cell = crofton_cell_2d(pts, 6.0);
  REQUIRE(cell);
  CHECK(cell->contains({0.0, 0.0}, 1e-12));
  CHECK(cell->contains({0.2, 0.1}, 1e-12));
}

TEST_CASE("users are uniform in their cell") {
  const auto sq = CellPolygon::square({0.0, 0.0}, 1.0);
  Engine eng = make_substream({14, 0});
  int left_half = 0;
  int inner_disk = 0;
  const int n = 40'000;
  for (int i = 0; i < n; ++i) {
    const Point2 y = sample_user_in_cell(sq, eng);
    REQUIRE(sq.contains(y, 1e-12));
    left_half += y.x < 0.0;
    inner_disk += norm(y) < 0.5;
  }
  CHECK(std::abs(left_half / double(n) - 0.5) < 0.01);
  CHECK(std::abs(inner_disk / double(n) - kPi / 16.0) < 0.01);
  const double u = sample_user_in_cell(Interval{-1.0, 2.0}, eng);
  CHECK(u >= -1.0);
  CHECK(u <= 2.0);
}

TEST_CASE("realizations") {
  const SimWindow w = SimWindow::default_for(2, 1.0);
  for (std::uint64_t i = 0; i < 200; ++i) {
    Engine e1 = make_substream({15, i});
    const auto r1 = realize(UserProcess::type1, w, 1.0, {15, i}, e1);
    REQUIRE(r1);
    CHECK(r1->dominant_interferer_distance >= r1->serving_distance);
    CHECK(r1->seed_path.index == i);

    Engine e2 = make_substream({15, i});
    const auto r2 = realize(UserProcess::type2, w, 1.0, {15, i}, e2);
    REQUIRE(r2);
    CHECK(r2->user == Point2{});
    CHECK(r2->serving_distance <= r2->dominant_interferer_distance);
    for (std::size_t k = 0; k < r2->interferers.size(); ++k) {
      REQUIRE(norm(r2->interferers.at(k)) >= r2->serving_distance);
    }
    // Same seed, same Psi: the Type II interferers are the Type I set minus
    // the nearest point.
    CHECK(r2->interferers.size() + 1 == r1->interferers.size());
  }
}

TEST_CASE("cell size means") {
  // Typical cell mean size is 1/lambda in any dimension; in 1-D the Crofton
  // cell (two independent exponential half-gaps plus the size-biased gap)
  // has mean 1.5/lambda.
  const double lambda = 2.0;
  const SimWindow w1 = SimWindow::default_for(1, lambda);
  double typ = 0.0;
  double crof = 0.0;
  const int n = 40'000;
  for (int i = 0; i < n; ++i) {
    Engine eng = make_substream({16, static_cast<std::uint64_t>(i)});
    const PointSet p = sample_ppp_ordered(w1, lambda, eng);
    typ += typical_cell_1d(p.x)->length();
    crof += crofton_cell_1d(p.x)->length();
  }
  CHECK(std::abs(typ / n - 1.0 / lambda) < 4.0 * (1.0 / lambda) / std::sqrt(2.0 * n));
  CHECK(std::abs(crof / n - 1.5 / lambda) < 0.01);

  const SimWindow w2 = SimWindow::default_for(2, lambda);
  double area = 0.0;
  const int m = 10'000;
  for (int i = 0; i < m; ++i) {
    Engine eng = make_substream({17, static_cast<std::uint64_t>(i)});
    const PointSet p = sample_ppp_ordered(w2, lambda, eng);
    const auto cell = typical_cell_2d(p, w2.radius);
    REQUIRE(cell);
    area += cell->area();
  }
  // Typical-cell area variance is about 0.28 / lambda^2.
  CHECK(std::abs(area / m - 1.0 / lambda) < 4.0 * std::sqrt(0.28 / m) / lambda);
}

}
