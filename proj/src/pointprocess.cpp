#include "typcell/pointprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "typcell/errors.hpp"
#include "typcell/kernels.hpp"

namespace typcell {

namespace {

constexpr double kPi = std::numbers::pi;

Point2 polar(Point2 centre, double r, double theta) {
  return {centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)};
}

bool sorted_by_distance(const PointSet &pts, Point2 from) {
  double prev = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d2 = norm2(pts.at(i) - from);
    if (d2 < prev) {
      return false;
    }
    prev = d2;
  }
  return true;
}

std::vector<std::size_t> order_by_distance(const PointSet &pts, Point2 from) {
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!sorted_by_distance(pts, from)) {
    std::vector<double> d2(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d2[i] = norm2(pts.at(i) - from);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d2[a] < d2[b]; });
  }
  return order;
}

// Voronoi cell of `nucleus` against the points of `pts` in `order`, skipping
// index `skip`. `reach` is the distance from the nucleus below which unseen
// points (outside the window) cannot exist.
std::optional<CellPolygon> clip_cell(const PointSet &pts, const std::vector<std::size_t> &order, Point2 nucleus,
                                     std::size_t skip, double seed_half_width, double reach) {
  CellPolygon cell = CellPolygon::square(nucleus, seed_half_width);
  double max_vertex = cell.max_distance_from(nucleus);
  for (const std::size_t k : order) {
    if (k == skip) {
      continue;
    }
    const Point2 other = pts.at(k);
    const double d = norm(other - nucleus);
    if (d > 2.0 * max_vertex) {
      break;
    }
    cell.clip_bisector(nucleus, other);
    if (cell.empty()) {
      return std::nullopt;
    }
    max_vertex = cell.max_distance_from(nucleus);
  }
  // Unseen points lie at least `reach` away and cannot cut the cell only if
  // they are beyond twice its radius.
  if (2.0 * max_vertex <= reach) {
    return cell;
  }
  return std::nullopt;
}

} // namespace

SimWindow SimWindow::default_for(int dimension, double lambda) {
  if (!(lambda > 0.0)) {
    throw ParameterError("density must be > 0");
  }
  if (dimension == 1) {
    return {1, 25.0 / lambda};
  }
  if (dimension == 2) {
    return {2, 20.0 / std::sqrt(kPi * lambda)};
  }
  throw ParameterError("dimension must be 1 or 2");
}

double SimWindow::measure() const { return dimension == 1 ? 2.0 * radius : kPi * radius * radius; }

void SimWindow::validate(double lambda) const {
  if (dimension != 1 && dimension != 2) {
    throw ParameterError("window dimension must be 1 or 2");
  }
  if (!(radius > 0.0)) {
    throw ParameterError("window radius must be > 0");
  }
  if (!(lambda * measure() >= 50.0)) {
    throw ParameterError("window too small: expected point count lambda*|W| must be >= 50");
  }
}

PointSet sample_ppp(const SimWindow &window, double lambda, Engine &eng) {
  PointSet pts;
  const double mean = lambda * window.measure();
  if (!(mean > 0.0)) {
    return pts;
  }
  const auto count = std::poisson_distribution<long long>(mean)(eng);
  pts.x.reserve(static_cast<std::size_t>(count));
  if (window.dimension == 2) {
    pts.y.reserve(static_cast<std::size_t>(count));
  }
  for (long long i = 0; i < count; ++i) {
    if (window.dimension == 1) {
      pts.x.push_back(window.radius * (2.0 * uniform01(eng) - 1.0));
    } else {
      const double r = window.radius * std::sqrt(uniform01(eng));
      const double theta = 2.0 * kPi * uniform01(eng);
      pts.push_back(polar({}, r, theta), 2);
    }
  }
  return pts;
}

PointSet sample_ppp_ordered(const SimWindow &window, double lambda, Engine &eng, Point2 centre,
                            double inner_radius) {
  PointSet pts;
  if (!(lambda > 0.0) || inner_radius >= window.radius) {
    return pts;
  }
  std::array<double, 64> gaps{};

  if (window.dimension == 2) {
    const double rate = kPi * lambda;
    const double limit = rate * window.radius * window.radius;
    const double expected = limit - rate * inner_radius * inner_radius;
    pts.x.reserve(static_cast<std::size_t>(expected * 1.2) + 8);
    double epoch = rate * inner_radius * inner_radius;
    // Radii first (stored in x), then one direction per point.
    for (bool done = false; !done;) {
      fill_unit_exponential(eng, gaps);
      for (const double g : gaps) {
        epoch += g;
        if (epoch > limit) {
          done = true;
          break;
        }
        pts.x.push_back(std::sqrt(epoch / rate));
      }
    }
    pts.y.resize(pts.x.size());
    for (std::size_t i = 0; i < pts.x.size(); ++i) {
      const double r = pts.x[i];
      const Direction dir = unit_direction(eng);
      pts.x[i] = centre.x + r * dir.cos;
      pts.y[i] = centre.y + r * dir.sin;
    }
    return pts;
  }

  // d = 1: the two half-lines are independent Poisson processes of rate lambda.
  std::vector<double> right;
  std::vector<double> left;
  for (std::vector<double> *side : {&right, &left}) {
    double r = inner_radius;
    for (bool done = false; !done;) {
      fill_unit_exponential(eng, std::span(gaps).first(16));
      for (const double g : std::span(gaps).first(16)) {
        r += g / lambda;
        if (r > window.radius) {
          done = true;
          break;
        }
        side->push_back(r);
      }
    }
  }
  pts.x.reserve(right.size() + left.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < right.size() || j < left.size()) {
    if (j == left.size() || (i < right.size() && right[i] <= left[j])) {
      pts.x.push_back(centre.x + right[i++]);
    } else {
      pts.x.push_back(centre.x - left[j++]);
    }
  }
  return pts;
}

std::optional<Interval> typical_cell_1d(std::span<const double> interferers) {
  double left = std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  for (const double x : interferers) {
    if (x < 0.0) {
      left = std::min(left, -x);
    } else if (x > 0.0) {
      right = std::min(right, x);
    }
  }
  if (!std::isfinite(left) || !std::isfinite(right)) {
    return std::nullopt;
  }
  return Interval{-0.5 * left, 0.5 * right};
}

std::optional<CellPolygon> typical_cell_2d(const PointSet &interferers, double window_radius) {
  const auto order = order_by_distance(interferers, {});
  return clip_cell(interferers, order, {}, interferers.size(), window_radius, window_radius);
}

std::optional<Interval> crofton_cell_1d(std::span<const double> interferers) {
  if (interferers.empty()) {
    return std::nullopt;
  }
  const auto nucleus_it =
      std::min_element(interferers.begin(), interferers.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); });
  const double nucleus = *nucleus_it;
  double left = std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  for (const double x : interferers) {
    const double d = x - nucleus;
    if (d < 0.0) {
      left = std::min(left, -d);
    } else if (d > 0.0) {
      right = std::min(right, d);
    }
  }
  if (!std::isfinite(left) || !std::isfinite(right)) {
    return std::nullopt;
  }
  return Interval{nucleus - 0.5 * left, nucleus + 0.5 * right};
}

std::optional<CellPolygon> crofton_cell_2d(const PointSet &interferers, double window_radius) {
  if (interferers.empty()) {
    return std::nullopt;
  }
  std::size_t nucleus_index = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < interferers.size(); ++i) {
    const double d2 = norm2(interferers.at(i));
    if (d2 < best) {
      best = d2;
      nucleus_index = i;
    }
  }
  const Point2 nucleus = interferers.at(nucleus_index);
  const auto order = order_by_distance(interferers, nucleus);
  const double reach = window_radius - norm(nucleus);
  if (!(reach > 0.0)) {
    return std::nullopt;
  }
  return clip_cell(interferers, order, nucleus, nucleus_index, window_radius, reach);
}

Point2 sample_user_in_cell(const CellPolygon &cell, Engine &eng) {
  const auto &v = cell.vertices();
  const std::size_t n = v.size();
  if (n < 3) {
    throw std::invalid_argument("sample_user_in_cell: degenerate cell");
  }
  const Point2 c = cell.vertex_mean();
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += 0.5 * std::abs(cross(v[i] - c, v[(i + 1) % n] - c));
    cumulative[i] = total;
  }
  const double pick = uniform01(eng) * total;
  const std::size_t tri = std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin()),
      n - 1);
  const double a = std::sqrt(uniform01(eng));
  const double b = uniform01(eng);
  const Point2 p1 = v[tri];
  const Point2 p2 = v[(tri + 1) % n];
  return (1.0 - a) * c + (a * (1.0 - b)) * p1 + (a * b) * p2;
}

double sample_user_in_cell(const Interval &cell, Engine &eng) {
  return cell.lo + uniform01(eng) * cell.length();
}

std::optional<NetworkRealization> realize(UserProcess process, const SimWindow &window, double lambda,
                                          SeedPath path, Engine &eng) {
  NetworkRealization out;
  out.dimension = window.dimension;
  out.density = lambda;
  out.process = process;
  out.seed_path = path;

  PointSet pts = sample_ppp_ordered(window, lambda, eng);

  if (process == UserProcess::type2) {
    if (pts.size() < 2) {
      return std::nullopt;
    }
    out.serving_bs = pts.at(0);
    out.serving_distance = norm(out.serving_bs);
    out.dominant_interferer_distance = norm(pts.at(1));
    pts.x.erase(pts.x.begin());
    if (window.dimension == 2) {
      pts.y.erase(pts.y.begin());
    }
    out.user = {};
    out.interferers = std::move(pts);
    return out;
  }

  if (window.dimension == 1) {
    const auto cell = typical_cell_1d(pts.x);
    if (!cell) {
      return std::nullopt;
    }
    const double y = sample_user_in_cell(*cell, eng);
    out.user = {y, 0.0};
    out.serving_distance = std::abs(y);
    double r1 = std::numeric_limits<double>::infinity();
    for (const double x : pts.x) {
      r1 = std::min(r1, std::abs(x - y));
    }
    out.dominant_interferer_distance = r1;
  } else {
    const auto cell = typical_cell_2d(pts, window.radius);
    if (!cell) {
      return std::nullopt;
    }
    out.user = sample_user_in_cell(*cell, eng);
    out.serving_distance = norm(out.user);
    const auto nearest = kernels::nearest_2d(pts.x, pts.y, out.user.x, out.user.y);
    out.dominant_interferer_distance = std::sqrt(nearest.distance2);
  }
  if (out.dominant_interferer_distance < out.serving_distance * (1.0 - 1e-9)) {
    throw std::logic_error("Type I realization violates R1 >= R0");
  }
  out.interferers = std::move(pts);
  return out;
}

} // namespace typcell
