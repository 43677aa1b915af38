#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "typcell/geometry.hpp"
#include "typcell/random.hpp"

namespace typcell {

enum class UserProcess { type1, type2 };

/// Finite observation window centred at the origin: the interval
/// [-radius, radius] for d = 1, the disk of that radius for d = 2.
struct SimWindow {
  int dimension = 2;
  double radius = 1.0;

  /// 25/lambda for d = 1 (50 expected points), 20/sqrt(pi lambda) for d = 2
  /// (400 expected points).
  static SimWindow default_for(int dimension, double lambda);

  /// Length (d = 1) or area (d = 2).
  [[nodiscard]] double measure() const;

  /// Throws ParameterError for a bad dimension, radius <= 0 or an expected
  /// point count lambda |W| below 50.
  void validate(double lambda) const;
};

/// Structure-of-arrays point set; `y` is empty for d = 1.
struct PointSet {
  std::vector<double> x;
  std::vector<double> y;

  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  [[nodiscard]] bool empty() const noexcept { return x.empty(); }
  [[nodiscard]] Point2 at(std::size_t i) const { return {x[i], y.empty() ? 0.0 : y[i]}; }
  void push_back(Point2 p, int dimension) {
    x.push_back(p.x);
    if (dimension == 2) {
      y.push_back(p.y);
    }
  }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double length() const noexcept { return hi - lo; }
};

/// Homogeneous PPP on the window: Poisson(lambda |W|) count, i.i.d. uniform
/// positions, in generation order.
PointSet sample_ppp(const SimWindow &window, double lambda, Engine &eng);

/// Same law as sample_ppp restricted to distances in (inner_radius,
/// window.radius] from `centre`, produced in increasing distance from
/// `centre`. Distances are the arrival epochs of a Poisson process in
/// lambda kappa_d r^d, so no sort is needed.
PointSet sample_ppp_ordered(const SimWindow &window, double lambda, Engine &eng, Point2 centre = {},
                            double inner_radius = 0.0);

/// Typical cell of Phi = Psi + {o} in 1-D: [-L/2, R/2] with L, R the distances
/// to the nearest interferer on each side. nullopt if a side is empty.
std::optional<Interval> typical_cell_1d(std::span<const double> interferers);

/// Typical cell of Phi = Psi + {o} in 2-D: a seed square of half-width
/// `window_radius` clipped by bisectors in increasing distance order. Clipping
/// stops once the next interferer is farther than twice the largest vertex
/// distance; points beyond the window are at least `window_radius` away, so
/// the cell is certified closed only when twice that vertex distance is
/// within reach of the data. nullopt flags an unclosed cell.
std::optional<CellPolygon> typical_cell_2d(const PointSet &interferers, double window_radius);

/// Cell of the tessellation of Psi alone that contains the origin (the
/// Crofton cell): the cell of the interferer nearest to the origin.
std::optional<Interval> crofton_cell_1d(std::span<const double> interferers);
std::optional<CellPolygon> crofton_cell_2d(const PointSet &interferers, double window_radius);

/// Uniform point in a convex cell: fan triangulation around the vertex mean,
/// area-weighted triangle choice, uniform barycentric draw.
Point2 sample_user_in_cell(const CellPolygon &cell, Engine &eng);
double sample_user_in_cell(const Interval &cell, Engine &eng);

/// One sampled network seen from its typical user.
///
/// Type I: the typical BS sits at the origin and is the serving BS; the
/// user is uniform in its cell and every point of Psi interferes.
/// Type II: the user sits at the origin and is served by the nearest point of
/// Psi; the remaining points interfere.
///
/// `interferers` is ordered by distance from the origin (the window centre),
/// which is what cell construction needs.
struct NetworkRealization {
  int dimension = 2;
  double density = 1.0;
  UserProcess process = UserProcess::type1;
  PointSet interferers;
  Point2 user;
  Point2 serving_bs;
  double serving_distance = 0.0;
  double dominant_interferer_distance = 0.0;
  SeedPath seed_path;
};

/// Draws one realization from `eng` (the substream of `path`). Geometry is
/// drawn first, so experiments that later draw fading from the same engine
/// still share realizations. nullopt flags a discarded draw (cell not closed
/// inside the window, or too few points).
std::optional<NetworkRealization> realize(UserProcess process, const SimWindow &window, double lambda,
                                          SeedPath path, Engine &eng);

} // namespace typcell
