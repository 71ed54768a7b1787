#pragma once

#include <functional>
#include <span>
#include <vector>

namespace colombeau {

using RealFunction = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
  /// Accumulated floating-point noise floor of the panel sums; already included
  /// in error_estimate.
  double roundoff_estimate = 0.0;

  /// Converged, or stalled at a level the roundoff floor explains.
  bool acceptable() const { return converged || error_estimate <= 16.0 * roundoff_estimate; }
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;
  /// Tolerance relative to the integral of |f|; useful when f itself carries quadrature noise.
  double l1_rel_tol = 0.0;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

/// Single fixed 15-point Gauss-Legendre panel on [a, b].
double gauss_legendre_15(const RealFunction& f, double a, double b);

/**
 Adaptive composite 15-point Gauss-Legendre quadrature.

 Each panel is compared against the sum over its two halves; the panel with the
 largest discrepancy is bisected until the total discrepancy drops below
 max(abs_tol, rel_tol * |value|). `breakpoints` (sorted, inside (a, b)) seed
 the initial partition so kinks and narrow features start on a panel edge.
 */
QuadResult integrate(const RealFunction& f, double a, double b, const QuadOptions& opts,
                     std::span<const double> breakpoints = {});

QuadResult integrate(const RealFunction& f, double a, double b, double tol);

/// An even, eventually decreasing upper bound on |f| used to truncate the real line.
struct DecayEnvelope {
  RealFunction bound;
};

/// Two-sided tail integral of the envelope beyond |x| = radius.
double envelope_tail(const DecayEnvelope& envelope, double radius);

/// Integral over the real line; truncation radius chosen so the envelope tail is below tol/2.
QuadResult integrate_decaying(const RealFunction& f, const DecayEnvelope& envelope, double tol,
                              std::span<const double> breakpoints = {});

/**
 Cauchy principal value of the integral of f over [a, b] with a singularity at s.

 The symmetric part integrates f(s + t) + f(s - t) over (0, min(s - a, b - s)];
 the leftover one-sided piece is an ordinary integral.
 */
QuadResult integrate_pv(const RealFunction& f, double singularity, double a, double b,
                        const QuadOptions& opts);

QuadResult integrate_pv(const RealFunction& f, double singularity, double a, double b, double tol);

}  // namespace colombeau
