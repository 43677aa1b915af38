#include "typcell/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace typcell::quad {

namespace {

// Kronrod abscissae and weights of the 15-point rule; the 7-point Gauss
// rule uses the odd-indexed abscissae plus the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Segment &lhs, const Segment &rhs) const { return lhs.error < rhs.error; }
};

Segment gauss_kronrod_15(const Integrand &f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};

  const double fc = f(centre);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  double res_abs = std::abs(res_k);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    res_g += kWg[j] * (f1 + f2);
    res_k += kWgk[jtw] * (f1 + f2);
    res_abs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    res_k += kWgk[jtwm1] * (f1 + f2);
    res_abs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }

  const double mean = 0.5 * res_k;
  double res_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    res_asc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  }

  const double value = res_k * half;
  res_abs *= abs_half;
  res_asc *= abs_half;
  double err = std::abs((res_k - res_g) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > kUflow / (50.0 * kEps)) {
    err = std::max(50.0 * kEps * res_abs, err);
  }
  return {a, b, value, err};
}

bool is_finite_value(double v) { return std::isfinite(v); }

} // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
    throw ParameterError("QuadratureSpec: abs_tol and rel_tol must be > 0 and max_subdivisions >= 1");
  }
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  return {abs_tol / factor, rel_tol / factor, max_subdivisions};
}

QuadratureError::QuadratureError(std::string context, QuadratureResult best)
    : NumericalError([&] {
        std::ostringstream os;
        os << "quadrature did not converge (" << context << "): best estimate " << best.value
           << ", error bound " << best.error_estimate << " after " << best.subdivisions
           << " subdivisions";
        return os.str();
      }()),
      best_(best) {}

QuadratureResult integrate(Integrand f, double a, double b, const QuadratureSpec &spec) {
  spec.validate();
  if (std::isnan(a) || std::isnan(b) || a > b) {
    throw ParameterError("integrate: requires a <= b");
  }
  if (std::isinf(b)) {
    if (std::isinf(a)) {
      throw ParameterError("integrate: lower limit must be finite");
    }
    return integrate_semi_infinite(f, a, spec);
  }
  if (a == b) {
    return {};
  }

  std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
  Segment first = gauss_kronrod_15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);

  QuadratureResult out;
  auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };

  while (total_err > target()) {
    if (out.subdivisions >= spec.max_subdivisions) {
      out.converged = false;
      break;
    }
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // No representable point strictly inside: roundoff floor reached.
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    const Segment left = gauss_kronrod_15(f, worst.a, mid);
    const Segment right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++out.subdivisions;
  }

  // Re-sum from the segments to shed accumulated update drift.
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error_estimate = err;
  if (!is_finite_value(sum) || !is_finite_value(err)) {
    out.converged = false;
  }
  return out;
}

QuadratureResult integrate_semi_infinite(Integrand f, double a, const QuadratureSpec &spec) {
  if (!std::isfinite(a)) {
    throw ParameterError("integrate_semi_infinite: lower limit must be finite");
  }
  auto mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double u = a + t / one_minus;
    if (!std::isfinite(u)) {
      return 0.0; // t rounded onto the endpoint
    }
    return f(u) / (one_minus * one_minus);
  };
  return integrate(Integrand(mapped), 0.0, 1.0, spec);
}

double value_or_throw(const QuadratureResult &result, std::string_view context) {
  if (!result.converged) {
    throw QuadratureError(std::string(context), result);
  }
  return result.value;
}

} // namespace typcell::quad
