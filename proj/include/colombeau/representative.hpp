#pragma once

#include "colombeau/expr.hpp"
#include "colombeau/mollifier.hpp"

namespace colombeau {

/// Closed interval [lo, hi].
struct Interval {
  double lo = -10.0;
  double hi = 10.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& k) const { return k.lo >= lo && k.hi <= hi; }
  double length() const { return hi - lo; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct EvalOptions {
  /// Relative tolerance of convolution quadratures.
  double quad_tol = 1e-8;
  /// Finite-difference step relative to eps.
  double h_rel = 1e-3;
};

/**
 The family g_eps(x) of an expression under a fixed mollifier.

 Sums, products, scaling and composition act pointwise; derivatives are
 propagated exactly through Taylor jets wherever the leaves provide analytic
 derivatives and fall back to centered finite differences with step eps * h_rel.
 */
class Representative {
 public:
  Representative(Expr expr, Mollifier mollifier, Interval domain = {}, EvalOptions options = {});

  const Expr& expr() const { return expr_; }
  const Mollifier& mollifier() const { return mollifier_; }
  const Interval& domain() const { return domain_; }
  const EvalOptions& options() const { return options_; }

  /// g_eps(x) for eps in (0, 1) and x in the domain.
  double operator()(double eps, double x) const { return derivative(0, eps, x); }
  /// D^alpha g_eps(x).
  double derivative(int alpha, double eps, double x) const;
  /// Derivatives 0..order of g_eps at x as a Taylor jet.
  Jet jet(double eps, double x, int order) const;

 private:
  Jet jet_from(double eps, double x, int order, int needed) const;

  Expr expr_;
  Mollifier mollifier_;
  Interval domain_;
  EvalOptions options_;
};

double eval_repr(const Representative& rep, double eps, double x);

/// (f)_eps(x) = int eta(z) f(x + eps z) dz.
double embed_eval(const Dist& dist, const Mollifier& m, double eps, double x, const EvalOptions& options = {});

enum class DerivativeRoute {
  /// Closed-form rules where known (D H = delta, D^2 |x| = 2 delta, ...), convolution otherwise.
  analytic,
  /// (-1/eps)^k int eta^(k)(z) f(x + eps z) dz for every distribution with a classical density.
  convolution,
};

/// D^k (f)_eps(x).
double embed_derivative_eval(const Dist& dist, const Mollifier& m, int k, double eps, double x,
                             DerivativeRoute route = DerivativeRoute::analytic, const EvalOptions& options = {});

/// (f)_eps(x) - f(x), computed without cancellation.
double smooth_embedding_residual(const Smooth& f, const Mollifier& m, double eps, double x,
                                 const EvalOptions& options = {});

/// Highest derivative order an expression supports without finite differences.
int analytic_derivative_order(const Expr& e, const Mollifier& m);

}  // namespace colombeau
