#pragma once

#include <limits>

#include "typcell/quadrature.hpp"

namespace typcell::analytic {

/// Correction factor for the typical-cell link distance (ratio of the mean
/// Crofton-cell and typical-cell areas).
inline constexpr double kRho0 = 9.0 / 7.0;
/// Best-fit correction factor for the dominant-interferer distance.
inline constexpr double kRho1BestFit = 1.31;

struct ModelParams {
  double alpha = 4.0;
  /// dimension / alpha; 2/alpha in the planar formulas.
  double delta = 0.5;
  double lambda = 1.0;
  double rho0 = kRho0;
  double rho1 = kRho0;

  /// Builds parameters with delta = dimension / alpha. A NaN rho1 means
  /// "same as rho0".
  static ModelParams make(double alpha, double lambda = 1.0, int dimension = 2, double rho0 = kRho0,
                          double rho1 = std::numeric_limits<double>::quiet_NaN());

  /// alpha > 2, lambda > 0, rho0 >= 1, rho1 >= 1; throws ParameterError.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Type II (user at a fixed location, i.e. in the Crofton cell)

/// [1 + tau^(d/alpha) * int_{tau^(-d/alpha)}^inf du / (1 + u^(alpha/d))]^(-1).
/// Independent of lambda.
double coverage_type2(double tau, const ModelParams &params, int dimension,
                      const quad::QuadratureSpec &spec = {});

// ---------------------------------------------------------------------------
// Type I, d = 1 (exact)

/// Joint density of the distances from the typical BS to its two neighbours,
/// ordered r1 <= r2: 2 lambda^2 exp(-lambda (r1 + r2)); zero outside the
/// support.
double joint_pdf_r1r2(double r1, double r2, double lambda);

/// CDF of the link distance given the neighbour distances r1 <= r2.
double cdf_ro_given_r1r2_1d(double r, double r1, double r2);

/// Laplace transform of the interference seen by a user whose nearest
/// interferers on the two sides are at distances u and v, each side
/// continuing as a PPP of density lambda.
double lt_interference_1d(double s, double u, double v, const ModelParams &params,
                          const quad::QuadratureSpec &spec = {});

/// P[SIR > tau | r1, r2]: the user uniform in [-r1/2, r2/2] (either side).
double coverage_type1_1d_given(double tau, double r1, double r2, const ModelParams &params,
                               const quad::QuadratureSpec &spec = {});

/// Exact Type I coverage in 1-D: the conditional coverage averaged over the
/// joint density of (r1, r2). Four nested quadrature levels; tolerances are
/// tightened tenfold per level.
double coverage_type1_1d(double tau, const ModelParams &params,
                         const quad::QuadratureSpec &spec = {1e-7, 1e-6, 2000});

// ---------------------------------------------------------------------------
// Type I, d = 2 (approximations)

/// 1 - exp(-pi rho0 lambda r^2).
double cdf_ro_2d(double r, const ModelParams &params);
double pdf_ro_2d(double r, const ModelParams &params);

/// 1 - exp(-pi lambda rho1 (v^2 - ro^2)) for v >= ro, 0 below.
double cdf_r1_given_ro_2d(double v, double ro, const ModelParams &params);

/// Marginal CDF of the dominant-interferer distance: the conditional CDF
/// mixed over the link-distance law. For rho1 == rho0 this is
/// 1 - (pi lambda rho0 v^2 + 1) exp(-pi lambda rho0 v^2).
double cdf_r1_2d(double v, const ModelParams &params);

/// t * int_{1/t}^inf du / (1 + u^(1/delta)); 0 at t = 0.
double beta_tilde(double t, const ModelParams &params, const quad::QuadratureSpec &spec = {});

/// Dominant-interferer approximation of the Type I coverage:
///   rho0^2 tau^-delta int_0^{tau^delta} (beta_tilde(t) + rho0)^-2 / (1 + t^(1/delta)) dt.
/// With rho1 != rho0 the same derivation gives
///   rho0 rho1 tau^delta int_0^{tau^delta} dt /
///     ((1 + t^(1/delta)) (tau^delta (beta_tilde(t) + rho1) + t (rho0 - rho1))^2),
/// which reduces to the expression above when rho1 == rho0.
double coverage_type1_2d(double tau, const ModelParams &params, const quad::QuadratureSpec &spec = {});

/// Interferers as a PPP beyond the link distance only. Averaging
/// exp(-pi lambda r^2 beta_tilde(tau^delta)) over the link-distance density
/// 2 pi rho0 lambda r exp(-pi rho0 lambda r^2) gives rho0 / (rho0 + beta_tilde(tau^delta)).
double coverage_type1_app1_2d(double tau, const ModelParams &params, const quad::QuadratureSpec &spec = {});

/// Pair correlation of the dominant-interferer surrogate seen from the user
/// at link distance ro: 0 below ro, then F(r | ro) + rho1 (1 - F(r | ro)),
/// the PPP part plus the density of the dominant point itself.
double pcf_app2(double r, double ro, const ModelParams &params);

} // namespace typcell::analytic
