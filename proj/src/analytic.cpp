#include "typcell/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "typcell/errors.hpp"

namespace typcell::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void require_tau(double tau) {
  if (!(tau >= 0.0) || std::isinf(tau)) {
    throw ParameterError("SIR threshold tau must be finite and > 0");
  }
}

// int_a^inf dt / (1 + t^p), p > 1, on a finite interval with a smooth
// integrand. For a >= 1: t = 1/w gives w^(p-2) / (1 + w^p), and for p < 2 a
// further w = z^(1/(p-1)) removes the endpoint singularity. For a < 1: the
// full integral minus the head.
double power_tail(double a, double p, const quad::QuadratureSpec &spec, const char *context) {
  if (a >= 1.0 && p >= 2.0) {
    auto integrand = [p](double w) {
      const double wp = std::pow(w, p);
      return wp / (w * w * (1.0 + wp));
    };
    return quad::value_or_throw(quad::integrate(integrand, 0.0, 1.0 / a, spec), context);
  }
  if (a >= 1.0) {
    const double k = 1.0 / (p - 1.0);
    const double q = p * k;
    auto integrand = [k, q](double z) { return k / (1.0 + std::pow(z, q)); };
    return quad::value_or_throw(quad::integrate(integrand, 0.0, std::pow(a, 1.0 - p), spec), context);
  }
  const double full = (kPi / p) / std::sin(kPi / p);
  auto integrand = [p](double t) { return 1.0 / (1.0 + std::pow(t, p)); };
  return full - quad::value_or_throw(quad::integrate(integrand, 0.0, a, spec), context);
}

} // namespace

ModelParams ModelParams::make(double alpha, double lambda, int dimension, double rho0, double rho1) {
  if (dimension != 1 && dimension != 2) {
    throw ParameterError("dimension must be 1 or 2");
  }
  ModelParams p;
  p.alpha = alpha;
  p.delta = static_cast<double>(dimension) / alpha;
  p.lambda = lambda;
  p.rho0 = rho0;
  p.rho1 = std::isnan(rho1) ? rho0 : rho1;
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw ParameterError("path-loss exponent alpha must be > 2");
  }
  if (!(delta > 0.0)) {
    throw ParameterError("delta must be > 0");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("density lambda must be > 0");
  }
  if (!(rho0 >= 1.0) || !(rho1 >= 1.0)) {
    throw ParameterError("correction factors rho0 and rho1 must be >= 1");
  }
}

double coverage_type2(double tau, const ModelParams &params, int dimension, const quad::QuadratureSpec &spec) {
  params.validate();
  require_tau(tau);
  if (dimension != 1 && dimension != 2) {
    throw ParameterError("dimension must be 1 or 2");
  }
  if (!(params.alpha > dimension)) {
    throw ParameterError("coverage_type2: alpha must exceed the dimension");
  }
  if (tau == 0.0) {
    return 1.0;
  }
  const double e = static_cast<double>(dimension) / params.alpha;
  const double tail = power_tail(std::pow(tau, -e), 1.0 / e, spec, "coverage_type2");
  return 1.0 / (1.0 + std::pow(tau, e) * tail);
}

double joint_pdf_r1r2(double r1, double r2, double lambda) {
  if (r1 < 0.0 || r2 < 0.0) {
    throw ParameterError("joint_pdf_r1r2: distances must be >= 0");
  }
  if (r1 > r2) {
    return 0.0;
  }
  return 2.0 * lambda * lambda * std::exp(-lambda * (r1 + r2));
}

double cdf_ro_given_r1r2_1d(double r, double r1, double r2) {
  if (r < 0.0 || r1 < 0.0 || r1 > r2) {
    throw ParameterError("cdf_ro_given_r1r2_1d: requires r >= 0 and 0 <= r1 <= r2");
  }
  const double sum = r1 + r2;
  if (r <= 0.5 * r1) {
    return 4.0 * r / sum;
  }
  if (r <= 0.5 * r2) {
    return (2.0 * r + r1) / sum;
  }
  return 1.0;
}

double lt_interference_1d(double s, double u, double v, const ModelParams &params,
                          const quad::QuadratureSpec &spec) {
  if (!(s >= 0.0)) {
    throw ParameterError("lt_interference_1d: s must be >= 0");
  }
  if (!(u > 0.0) || !(v > 0.0)) {
    throw ParameterError("lt_interference_1d: distances must be > 0");
  }
  if (s == 0.0) {
    return 1.0;
  }
  const double alpha = params.alpha;
  // int_from^inf s / (r^alpha + s) dr, rescaled by r = s^(1/alpha) t.
  const double scale = std::pow(s, 1.0 / alpha);
  auto tail = [&](double from) { return scale * power_tail(from / scale, alpha, spec, "lt_interference_1d PPP tail"); };
  const double exponent = -params.lambda * (tail(u) + tail(v));
  return std::exp(exponent) / ((1.0 + s * std::pow(u, -alpha)) * (1.0 + s * std::pow(v, -alpha)));
}

double coverage_type1_1d_given(double tau, double r1, double r2, const ModelParams &params,
                               const quad::QuadratureSpec &spec) {
  require_tau(tau);
  if (r1 < 0.0 || r1 > r2) {
    throw ParameterError("coverage_type1_1d_given: requires 0 <= r1 <= r2");
  }
  if (r2 == 0.0) {
    return 1.0;
  }
  const quad::QuadratureSpec inner = spec.tightened();
  const double alpha = params.alpha;
  // User on the r1 side at distance r: interferers at r1 - r and r2 + r.
  auto toward_r1 = [&](double r) {
    return lt_interference_1d(tau * std::pow(r, alpha), r1 - r, r2 + r, params, inner);
  };
  auto toward_r2 = [&](double r) {
    return lt_interference_1d(tau * std::pow(r, alpha), r1 + r, r2 - r, params, inner);
  };
  const double left = r1 > 0.0 ? quad::value_or_throw(quad::integrate(toward_r1, 0.0, 0.5 * r1, spec),
                                                      "coverage_type1_1d: user on the near side")
                               : 0.0;
  const double right = quad::value_or_throw(quad::integrate(toward_r2, 0.0, 0.5 * r2, spec),
                                            "coverage_type1_1d: user on the far side");
  return 2.0 / (r1 + r2) * (left + right);
}

double coverage_type1_1d(double tau, const ModelParams &params, const quad::QuadratureSpec &spec) {
  params.validate();
  require_tau(tau);
  if (tau == 0.0) {
    return 1.0;
  }
  const quad::QuadratureSpec level1 = spec.tightened();
  const quad::QuadratureSpec level2 = level1.tightened();
  const double lambda = params.lambda;
  auto over_r1 = [&](double r2) {
    auto integrand = [&](double r1) {
      return joint_pdf_r1r2(r1, r2, lambda) * coverage_type1_1d_given(tau, r1, r2, params, level2);
    };
    return quad::value_or_throw(quad::integrate(integrand, 0.0, r2, level1), "coverage_type1_1d: r1 level");
  };
  return quad::value_or_throw(quad::integrate_semi_infinite(over_r1, 0.0, spec), "coverage_type1_1d: r2 level");
}

double cdf_ro_2d(double r, const ModelParams &params) {
  if (r <= 0.0) {
    return 0.0;
  }
  return -std::expm1(-kPi * params.rho0 * params.lambda * r * r);
}

double pdf_ro_2d(double r, const ModelParams &params) {
  if (r < 0.0) {
    return 0.0;
  }
  const double a = kPi * params.rho0 * params.lambda;
  return 2.0 * a * r * std::exp(-a * r * r);
}

double cdf_r1_given_ro_2d(double v, double ro, const ModelParams &params) {
  if (v <= ro) {
    return 0.0;
  }
  return -std::expm1(-kPi * params.lambda * params.rho1 * (v * v - ro * ro));
}

double cdf_r1_2d(double v, const ModelParams &params) {
  if (v <= 0.0) {
    return 0.0;
  }
  const double a = kPi * params.lambda * v * v;
  const double x0 = a * params.rho0;
  if (params.rho1 == params.rho0) {
    return 1.0 - (x0 + 1.0) * std::exp(-x0);
  }
  const double x1 = a * params.rho1;
  const double diff = params.rho0 - params.rho1;
  // int_0^v f_ro(r) exp(-pi lambda rho1 (v^2 - r^2)) dr
  const double mixed = -params.rho0 / diff * std::exp(-x1) * std::expm1(-a * diff);
  return -std::expm1(-x0) - mixed;
}

double beta_tilde(double t, const ModelParams &params, const quad::QuadratureSpec &spec) {
  if (!(t >= 0.0)) {
    throw ParameterError("beta_tilde: t must be >= 0");
  }
  if (t == 0.0) {
    return 0.0;
  }
  return t * power_tail(1.0 / t, 1.0 / params.delta, spec, "beta_tilde");
}

double coverage_type1_2d(double tau, const ModelParams &params, const quad::QuadratureSpec &spec) {
  params.validate();
  require_tau(tau);
  if (tau == 0.0) {
    return 1.0;
  }
  const double delta = params.delta;
  const double upper = std::pow(tau, delta);
  const double power = 1.0 / delta;
  const double rho0 = params.rho0;
  const double rho1 = params.rho1;
  const quad::QuadratureSpec inner = spec.tightened();

  if (rho1 == rho0) {
    auto integrand = [&](double t) {
      const double b = beta_tilde(t, params, inner) + rho0;
      return 1.0 / (b * b * (1.0 + std::pow(t, power)));
    };
    const double integral =
        quad::value_or_throw(quad::integrate(integrand, 0.0, upper, spec), "coverage_type1_2d");
    return rho0 * rho0 / upper * integral;
  }
  auto integrand = [&](double t) {
    const double c = upper * (beta_tilde(t, params, inner) + rho1) + t * (rho0 - rho1);
    return 1.0 / (c * c * (1.0 + std::pow(t, power)));
  };
  const double integral = quad::value_or_throw(quad::integrate(integrand, 0.0, upper, spec), "coverage_type1_2d");
  return rho0 * rho1 * upper * integral;
}

double coverage_type1_app1_2d(double tau, const ModelParams &params, const quad::QuadratureSpec &spec) {
  params.validate();
  require_tau(tau);
  if (tau == 0.0) {
    return 1.0;
  }
  const double b = beta_tilde(std::pow(tau, params.delta), params, spec);
  return params.rho0 / (params.rho0 + b);
}

double pcf_app2(double r, double ro, const ModelParams &params) {
  if (r < ro) {
    return 0.0;
  }
  const double survival = std::exp(-kPi * params.lambda * params.rho1 * (r * r - ro * ro));
  return (1.0 - survival) + params.rho1 * survival;
}

} // namespace typcell::analytic
