#include <doctest.h>

#include <cmath>
#include <numbers>

#include "typcell/analytic.hpp"
#include "typcell/random.hpp"

using namespace typcell;
using namespace typcell::analytic;

namespace {

constexpr double kPi = std::numbers::pi;

double integral(auto f, double a, double b, quad::QuadratureSpec spec = {1e-11, 1e-9, 4000}) {
  return quad::value_or_throw(quad::integrate(f, a, b, spec), "test integral");
}

// App2 coverage written directly as the expectation over (R0, R1):
//   E[ 1/(1 + tau (R0/R1)^alpha) exp(-pi lambda R0^2 beta(tau, R0, R1)) ],
// with the joint density of (R0, R1) spelled out and, for alpha = 4, the PPP
// term in closed form: beta = sqrt(tau) (pi/2 - atan((v/r)^2 / sqrt(tau))).
double app2_oracle_alpha4(double tau, double lambda, double rho0, double rho1) {
  const double st = std::sqrt(tau);
  auto over_r = [&](double r) {
    auto over_v = [&](double v) {
      const double q = v / r;
      const double beta = st * (kPi / 2.0 - std::atan(q * q / st));
      const double density = 2.0 * kPi * lambda * rho0 * r * 2.0 * kPi * lambda * rho1 * v *
                             std::exp(-kPi * lambda * rho0 * r * r - kPi * lambda * rho1 * (v * v - r * r));
      return density * std::exp(-kPi * lambda * r * r * beta) / (1.0 + tau * std::pow(r / v, 4.0));
    };
    return quad::value_or_throw(quad::integrate_semi_infinite(over_v, r, {1e-12, 1e-10, 4000}), "v");
  };
  return quad::value_or_throw(quad::integrate_semi_infinite(over_r, 0.0, {1e-10, 1e-9, 4000}), "r");
}

} // namespace

TEST_SUITE("analytic") {

TEST_CASE("model parameters") {
  const auto p = ModelParams::make(4.0);
  CHECK(p.delta == doctest::Approx(0.5));
  CHECK(p.rho0 == doctest::Approx(9.0 / 7.0));
  CHECK(p.rho1 == p.rho0);
  CHECK(ModelParams::make(4.0, 1.0, 1).delta == doctest::Approx(0.25));
  CHECK(ModelParams::make(4.0, 1.0, 2, kRho0, kRho1BestFit).rho1 == doctest::Approx(1.31));
  CHECK_THROWS_AS(ModelParams::make(2.0), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(4.0, 0.0), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(4.0, 1.0, 3), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(4.0, 1.0, 2, 0.9), ParameterError);
  CHECK_THROWS_AS(ModelParams::make(4.0, 1.0, 2, kRho0, 0.5), ParameterError);
}

TEST_CASE("Type II coverage") {
  const auto p2 = ModelParams::make(4.0, 1.0, 2);
  CHECK(coverage_type2(1.0, p2, 2) == doctest::Approx(1.0 / (1.0 + kPi / 4.0)).epsilon(1e-10));
  CHECK(std::abs(coverage_type2(1.0, p2, 2) - 0.5600991535) < 5e-11);
  // alpha = 4: the tail integral is pi/2 - atan(1/sqrt(tau)), i.e. atan(sqrt(tau)).
  for (const double tau : {0.01, 0.3, 3.0, 100.0}) {
    CAPTURE(tau);
    CHECK(coverage_type2(tau, p2, 2) ==
          doctest::Approx(1.0 / (1.0 + std::sqrt(tau) * std::atan(std::sqrt(tau)))).epsilon(1e-10));
  }
  const auto p1 = ModelParams::make(4.0, 1.0, 1);
  CHECK(std::abs(coverage_type2(1.0, p1, 1) - 0.8040215568) < 5e-11);
  CHECK(coverage_type2(1.0, p1, 1) ==
        doctest::Approx(1.0 / (1.0 + 0.24374774719968054)).epsilon(1e-12));
  CHECK(coverage_type2(0.0, p2, 2) == 1.0);
  CHECK_THROWS_AS(coverage_type2(-1.0, p2, 2), ParameterError);
  CHECK_THROWS_AS(coverage_type2(1.0, p2, 3), ParameterError);
  // Density free.
  CHECK(coverage_type2(2.0, ModelParams::make(4.0, 7.0, 2), 2) == coverage_type2(2.0, p2, 2));
}

TEST_CASE("1-D neighbour distances and link distance") {
  const double lambda = 1.7;
  const double mass = integral([&](double r2) {
    return integral([&](double r1) { return joint_pdf_r1r2(r1, r2, lambda); }, 0.0, r2);
  }, 0.0, 40.0);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(joint_pdf_r1r2(2.0, 1.0, lambda) == 0.0);

  CHECK(cdf_ro_given_r1r2_1d(0.0, 1.0, 3.0) == 0.0);
  CHECK(cdf_ro_given_r1r2_1d(0.5, 1.0, 3.0) == doctest::Approx(0.5)); // both sides open
  CHECK(cdf_ro_given_r1r2_1d(1.0, 1.0, 3.0) == doctest::Approx(0.75));
  CHECK(cdf_ro_given_r1r2_1d(1.5, 1.0, 3.0) == 1.0);
  CHECK_THROWS_AS(cdf_ro_given_r1r2_1d(0.5, 3.0, 1.0), ParameterError);
}

TEST_CASE("1-D interference Laplace transform against the direct tail integrals") {
  const auto p = ModelParams::make(3.5, 0.8, 1);
  for (const double s : {0.05, 1.0, 20.0}) {
    const double u = 0.4;
    const double v = 1.9;
    auto tail = [&](double from) {
      return quad::integrate_semi_infinite([&](double r) { return s / (std::pow(r, 3.5) + s); }, from).value;
    };
    const double direct = std::exp(-0.8 * (tail(u) + tail(v))) /
                          ((1.0 + s * std::pow(u, -3.5)) * (1.0 + s * std::pow(v, -3.5)));
    CAPTURE(s);
    CHECK(lt_interference_1d(s, u, v, p) == doctest::Approx(direct).epsilon(1e-9));
  }
  CHECK(lt_interference_1d(0.0, 1.0, 1.0, p) == 1.0);
}

TEST_CASE("1-D conditional coverage against a conditional simulation") {
  // Neighbours at -r1 and +r2, the user uniform in [-r1/2, r2/2], PPP beyond
  // the neighbours on both sides.
  const double r1 = 0.6;
  const double r2 = 1.4;
  const double lambda = 1.0;
  const double tau = 1.0;
  const auto p = ModelParams::make(4.0, lambda, 1);
  const double exact = coverage_type1_1d_given(tau, r1, r2, p);
  Engine eng = make_substream({31, 0});
  const int n = 100'000;
  int covered = 0;
  for (int i = 0; i < n; ++i) {
    const double y = -0.5 * r1 + uniform01(eng) * 0.5 * (r1 + r2);
    double interference = unit_exponential(eng) * std::pow(y + r1, -4.0) +
                           unit_exponential(eng) * std::pow(r2 - y, -4.0);
    for (const double side : {-1.0, 1.0}) {
      double x = side < 0 ? r1 : r2;
      for (;;) {
        x += unit_exponential(eng) / lambda;
        if (x > 60.0) {
          break;
        }
        interference += unit_exponential(eng) * std::pow(std::abs(side * x - y), -4.0);
      }
    }
    covered += unit_exponential(eng) * std::pow(std::abs(y), -4.0) > tau * interference;
  }
  const double mc = covered / double(n);
  CHECK(std::abs(mc - exact) < 4.0 * std::sqrt(exact * (1.0 - exact) / n));
}

TEST_CASE("1-D exact Type I coverage") {
  const auto p = ModelParams::make(4.0, 1.0, 1);
  const double c = coverage_type1_1d(1.0, p);
  // Frozen from this quadrature; a 1e6-draw full-geometry simulation gives
  // 0.8159 +- 0.0024 (99%).
  CHECK(c == doctest::Approx(0.816489).epsilon(2e-6));
  CHECK(coverage_type1_1d(0.0, p) == 1.0);
  // Cheaper spec for the shape checks.
  const quad::QuadratureSpec loose{1e-6, 1e-5, 2000};
  const double lo = coverage_type1_1d(0.3, p, loose);
  const double hi = coverage_type1_1d(3.0, p, loose);
  CHECK(lo > c);
  CHECK(hi < c);
  // Same answer at another density.
  CHECK(coverage_type1_1d(3.0, ModelParams::make(4.0, 3.0, 1), loose) == doctest::Approx(hi).epsilon(1e-5));
}

TEST_CASE("link-distance approximations") {
  const auto p = ModelParams::make(4.0);
  CHECK(cdf_ro_2d(0.0, p) == 0.0);
  CHECK(cdf_ro_2d(-1.0, p) == 0.0);
  // Median: pi rho0 r^2 = ln 2.
  CHECK(cdf_ro_2d(0.41425, p) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(integral([&](double r) { return pdf_ro_2d(r, p); }, 0.0, 10.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cdf_r1_given_ro_2d(0.6, 0.3, p) == doctest::Approx(0.66398).epsilon(1e-5));
  CHECK(cdf_r1_given_ro_2d(0.2, 0.3, p) == 0.0);
  CHECK(cdf_r1_2d(0.5, p) == doctest::Approx(0.26795).epsilon(1e-4));

  // Unconditional R1 CDF equals the R0 mixture of the conditional one, for
  // rho1 = rho0 and for the best-fit rho1.
  for (const double rho1 : {kRho0, kRho1BestFit, 2.0}) {
    const auto q = ModelParams::make(4.0, 1.3, 2, kRho0, rho1);
    for (const double v : {0.1, 0.45, 1.2}) {
      const double mix = integral([&](double r) { return pdf_ro_2d(r, q) * cdf_r1_given_ro_2d(v, r, q); }, 0.0, v);
      CAPTURE(rho1);
      CAPTURE(v);
      CHECK(cdf_r1_2d(v, q) == doctest::Approx(mix).epsilon(1e-10));
    }
  }
}

TEST_CASE("beta tilde") {
  const auto p = ModelParams::make(4.0);
  // alpha = 4: beta~(t) = t atan(t).
  for (const double t : {0.1, 1.0, 5.0, 40.0}) {
    CHECK(beta_tilde(t, p) == doctest::Approx(t * std::atan(t)).epsilon(1e-10));
  }
  CHECK(beta_tilde(0.0, p) == 0.0);
  CHECK_THROWS_AS(beta_tilde(-1.0, p), ParameterError);
}

TEST_CASE("Eq. 13 against the direct double integral") {
  for (const double tau : {0.1, 1.0, 10.0}) {
    const auto p = ModelParams::make(4.0, 1.0);
    CAPTURE(tau);
    CHECK(coverage_type1_2d(tau, p) == doctest::Approx(app2_oracle_alpha4(tau, 1.0, kRho0, kRho0)).epsilon(1e-7));
  }
  CHECK(coverage_type1_2d(1.0, ModelParams::make(4.0)) == doctest::Approx(0.5938505658).epsilon(1e-9));
}

TEST_CASE("general rho1 form against the direct double integral") {
  for (const double tau : {0.3, 3.0}) {
    const auto p = ModelParams::make(4.0, 2.0, 2, kRho0, kRho1BestFit);
    CAPTURE(tau);
    CHECK(coverage_type1_2d(tau, p) ==
          doctest::Approx(app2_oracle_alpha4(tau, 2.0, kRho0, kRho1BestFit)).epsilon(1e-7));
  }
  // Continuous into the rho1 = rho0 branch.
  const auto near = ModelParams::make(4.0, 1.0, 2, kRho0, kRho0 * (1.0 + 1e-9));
  CHECK(coverage_type1_2d(2.0, near) == doctest::Approx(coverage_type1_2d(2.0, ModelParams::make(4.0))).epsilon(1e-7));
}

TEST_CASE("App1 closed form and ordering") {
  const auto p = ModelParams::make(4.0);
  CHECK(coverage_type1_app1_2d(1.0, p) == doctest::Approx(0.6207843936).epsilon(1e-9));
  for (const double tau : {0.1, 1.0, 10.0, 100.0}) {
    const double st = std::sqrt(tau);
    CHECK(coverage_type1_app1_2d(tau, p) == doctest::Approx(kRho0 / (kRho0 + st * std::atan(st))).epsilon(1e-10));
    CHECK(coverage_type1_app1_2d(tau, p) >= coverage_type1_2d(tau, p));
  }
  double prev = 1.0;
  for (double db = -10.0; db <= 20.0; db += 2.5) {
    const double c = coverage_type1_2d(std::pow(10.0, db / 10.0), p);
    CHECK(c < prev);
    prev = c;
  }
  CHECK(coverage_type1_2d(0.0, p) == 1.0);
  // alpha = 3 goes through the semi-infinite branch of the tail integral.
  const auto p3 = ModelParams::make(3.0);
  CHECK(coverage_type1_app1_2d(1.0, p3) > coverage_type1_2d(1.0, p3));
}

TEST_CASE("App2 pair correlation") {
  const auto p = ModelParams::make(4.0);
  CHECK(pcf_app2(0.2, 0.3, p) == 0.0);
  CHECK(pcf_app2(0.3, 0.3, p) == doctest::Approx(kRho0));
  CHECK(pcf_app2(3.0, 0.3, p) == doctest::Approx(1.0).epsilon(1e-9));
  double prev = pcf_app2(0.3, 0.3, p);
  for (double r = 0.35; r < 2.0; r += 0.05) {
    const double g = pcf_app2(r, 0.3, p);
    CHECK(g <= prev);
    CHECK(g >= 1.0);
    prev = g;
  }
}

}
