#include "colombeau/representative.hpp"

#include "colombeau/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace colombeau {

namespace {

constexpr int kUnlimited = 64;
constexpr int kResidualSeriesTerms = 40;

struct Ctx {
  const Mollifier& m;
  double eps;
  const EvalOptions& opts;
};

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    std::ostringstream msg;
    msg << "eps = " << eps << " outside (0, 1)";
    throw InvalidArgument(msg.str());
  }
}

double sign_power(int k) { return k % 2 ? -1.0 : 1.0; }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double integration_radius(const Mollifier& m, int k) {
  if (m.kind() == MollifierKind::moment_gaussian) return 8.0 + 0.5 * k;
  return std::min(m.truncation_radius(1e-15), m.grid_limit());
}

/// int eta^(k)(z) g(z) dz over the truncation window; `singular` marks a principal-value point.
double convolve(const Ctx& c, int k, const RealFunction& g, std::vector<double> breaks, double singular,
                const char* what) {
  const double R = integration_radius(c.m, k);
  const double panel = c.m.kind() == MollifierKind::ft_plateau ? 4.0 : 2.0;
  for (double z = -R + panel; z < R; z += panel) breaks.push_back(z);
  std::sort(breaks.begin(), breaks.end());
  const Mollifier& m = c.m;
  RealFunction integrand = [&m, k, &g](double z) {
    const double e = m.derivative(k, z);
    return e == 0.0 ? 0.0 : e * g(z);
  };
  const QuadOptions qo{std::numeric_limits<double>::min(), c.opts.quad_tol, 4000};
  QuadResult res;
  if (std::isfinite(singular) && singular > -R && singular < R) {
    res = integrate_pv(integrand, singular, -R, R, qo);
  } else {
    res = integrate(integrand, -R, R, qo, breaks);
  }
  if (!res.acceptable()) {
    std::ostringstream msg;
    msg << "convolution quadrature for " << what << " did not converge: estimate " << res.value << ", error "
        << res.error_estimate << " after " << res.subdivisions << " subdivisions";
    throw NumericalFailure(msg.str());
  }
  return res.value;
}

std::vector<double> inside(double z0) { return std::isfinite(z0) ? std::vector<double>{z0} : std::vector<double>{}; }

double delta_derivative(const Ctx& c, int k, double x) {
  return sign_power(k) * std::pow(c.eps, -(k + 1)) * c.m.derivative(k, -x / c.eps);
}

double heaviside_value(const Ctx& c, double x) { return c.m.tail_mass(-x / c.eps); }

/// int eta(z) p(x + eps z) dz from the moments of eta.
double polynomial_embedding(const Ctx& c, const Smooth& p, int k, double x) {
  double v = 0.0;
  for (int i = 0; i + k <= p.degree(); ++i) {
    const double mi = c.m.moment(i);
    if (mi != 0.0) v += p.derivative(k + i, x) * std::pow(c.eps, i) * mi / factorial(i);
  }
  return v;
}

/// (-1/eps)^k int eta^(k)(z) f(x + eps z) dz for a distribution with a classical density.
double convolution_route(const Ctx& c, const Dist& d, int k, double x) {
  const double eps = c.eps;
  const double z0 = -x / eps;
  const double pre = sign_power(k) * std::pow(eps, -k);
  switch (d.tag()) {
    case DistTag::delta: return delta_derivative(c, k, x);
    case DistTag::heaviside:
      return pre * convolve(c, k, [z0](double z) { return z > z0 ? 1.0 : 0.0; }, inside(z0), NAN, "heaviside");
    case DistTag::sign:
      return pre * convolve(c, k, [z0](double z) { return z > z0 ? 1.0 : -1.0; }, inside(z0), NAN, "sign");
    case DistTag::abs:
      return pre * convolve(c, k, [x, eps](double z) { return std::abs(x + eps * z); }, inside(z0), NAN, "abs");
    case DistTag::power_plus: {
      const double r = d.exponent();
      return pre * convolve(
                       c, k, [x, eps, r](double z) { const double y = x + eps * z; return y > 0.0 ? std::pow(y, r) : 0.0; },
                       inside(z0), NAN, "power_plus");
    }
    case DistTag::pv_inverse:
      return pre * convolve(c, k, [x, eps](double z) { return 1.0 / (x + eps * z); }, {}, z0, "pv_inverse");
    case DistTag::polynomial: return polynomial_embedding(c, Smooth::poly(d.coeffs()), k, x);
    case DistTag::smooth_test: {
      const Bump& b = d.bump();
      std::vector<double> breaks{(b.center - b.radius - x) / eps, (b.center + b.radius - x) / eps};
      return convolve(c, 0, [&b, x, eps, k](double z) { return b.jet(x + eps * z, k).derivative(k); }, breaks, NAN,
                      "smooth_test");
    }
    case DistTag::smooth: {
      const Smooth& f = d.function();
      if (f.kind() == SmoothKind::poly) return polynomial_embedding(c, f, k, x);
      return convolve(c, 0, [&f, x, eps, k](double z) { return f.derivative(k, x + eps * z); }, {}, NAN, "smooth");
    }
  }
  return 0.0;
}

int leaf_capability(const Dist& d, const Mollifier& m) {
  const int n = m.max_derivative_order();
  switch (d.tag()) {
    case DistTag::delta:
    case DistTag::power_plus:
    case DistTag::pv_inverse: return n;
    case DistTag::heaviside:
    case DistTag::sign: return n + 1;
    case DistTag::abs: return n + 2;
    case DistTag::polynomial:
    case DistTag::smooth_test:
    case DistTag::smooth: return kUnlimited;
  }
  return 0;
}

/// D^k (f)_eps(x) by closed-form rules, for k within leaf_capability.
double analytic_route(const Ctx& c, const Dist& d, int k, double x) {
  switch (d.tag()) {
    case DistTag::delta: return delta_derivative(c, k, x);
    case DistTag::heaviside: return k == 0 ? heaviside_value(c, x) : delta_derivative(c, k - 1, x);
    case DistTag::sign: return k == 0 ? 2.0 * heaviside_value(c, x) - 1.0 : 2.0 * delta_derivative(c, k - 1, x);
    case DistTag::abs:
      if (k == 0) return convolution_route(c, d, 0, x);
      if (k == 1) return 2.0 * heaviside_value(c, x) - 1.0;
      return 2.0 * delta_derivative(c, k - 2, x);
    default: return convolution_route(c, d, k, x);
  }
}

/// Centered finite difference of order n of phi at x with step h.
double finite_difference(const RealFunction& phi, int n, double x, double h) {
  if (!(x + h != x) || !(h > 0.0)) {
    std::ostringstream msg;
    msg << "finite-difference step " << h << " underflows at x = " << x;
    throw NumericalFailure(msg.str());
  }
  double s = 0.0, binom = 1.0;
  for (int i = 0; i <= n; ++i) {
    s += sign_power(i) * binom * phi(x + (0.5 * n - i) * h);
    binom = binom * (n - i) / (i + 1);
  }
  return s / std::pow(h, n);
}

/// Coefficients below `needed` are left at zero; callers that only read D^needed.. skip them.
Jet leaf_jet(const Ctx& c, const Dist& d, double x, int order, int needed = 0) {
  const int cap = leaf_capability(d, c.m);
  std::vector<double> ds(order + 1, 0.0);
  for (int k = needed; k <= order; ++k) {
    if (k <= cap) {
      ds[k] = analytic_route(c, d, k, x);
    } else {
      ds[k] = finite_difference([&](double y) { return analytic_route(c, d, cap, y); }, k - cap, x, c.eps * c.opts.h_rel);
    }
  }
  return Jet::from_derivatives(std::span<const double>(ds));
}

/// D^k[(f)_eps - f](x): the quadrature only sees the Taylor remainder beyond order Q.
double residual_derivative(const Ctx& c, const Smooth& f, int k, double x) {
  const int Q = c.m.effective_order();
  double correction = 0.0;
  for (int i = 1; i <= Q; ++i) {
    const double mi = c.m.moment(i);
    if (mi != 0.0) correction += f.derivative(k + i, x) * std::pow(c.eps, i) * mi / factorial(i);
  }
  if (f.kind() == SmoothKind::poly) {
    // Exact: the remainder beyond Q is a polynomial in h, integrated against the moments.
    for (int i = Q + 1; i + k <= f.degree(); ++i) {
      correction += f.derivative(k + i, x) * std::pow(c.eps, i) * c.m.moment(i) / factorial(i);
    }
    return correction;
  }
  std::vector<double> a(Q + 1 + kResidualSeriesTerms);
  for (int i = 0; i < static_cast<int>(a.size()); ++i) a[i] = f.derivative(k + i, x) / factorial(i);
  const double eps = c.eps;
  auto remainder = [&a, &f, Q, k, x, eps](double z) {
    const double h = eps * z;
    if (std::abs(h) < 2.0) {
      double s = 0.0;
      for (int i = static_cast<int>(a.size()) - 1; i > Q; --i) s = s * h + a[i];
      return s * std::pow(h, Q + 1);
    }
    double taylor = 0.0;
    for (int i = Q; i >= 0; --i) taylor = taylor * h + a[i];
    return f.derivative(k, x + h) - taylor;
  };
  return correction + convolve(c, 0, remainder, {}, NAN, "smooth residual");
}

int capability(const Expr& e, const Mollifier& m);

struct Capability {
  const Mollifier& m;
  int operator()(const EmbedNode& n) const { return leaf_capability(n.dist, m); }
  int operator()(const SmoothNode&) const { return kUnlimited; }
  int operator()(const ResidualNode&) const { return kUnlimited; }
  int operator()(const SumNode& n) const { return min_of(n.args); }
  int operator()(const ProductNode& n) const { return min_of(n.args); }
  int operator()(const ScaleNode& n) const { return n.c == 0.0 ? kUnlimited : capability(n.arg, m); }
  int operator()(const DerivativeNode& n) const { return capability(n.arg, m) - n.order; }
  int operator()(const ComposeNode& n) const { return capability(n.arg, m); }
  int min_of(const std::vector<Expr>& args) const {
    int c = kUnlimited;
    for (const auto& a : args) c = std::min(c, capability(a, m));
    return c;
  }
};

int capability(const Expr& e, const Mollifier& m) { return std::visit(Capability{m}, e.node().v); }

Jet eval_jet(const Expr& e, const Ctx& c, double x, int order, int needed);

// Linear nodes pass `needed` (the lowest coefficient the caller reads) down to the leaves;
// nonlinear nodes need every coefficient of their arguments.
struct JetEval {
  const Ctx& c;
  double x;
  int order;
  int needed;

  Jet operator()(const EmbedNode& n) const { return leaf_jet(c, n.dist, x, order, needed); }
  Jet operator()(const SmoothNode& n) const { return n.f.jet(x, order); }
  Jet operator()(const ResidualNode& n) const {
    std::vector<double> ds(order + 1, 0.0);
    for (int k = needed; k <= order; ++k) ds[k] = residual_derivative(c, n.f, k, x);
    return Jet::from_derivatives(std::span<const double>(ds));
  }
  Jet operator()(const SumNode& n) const {
    Jet r = eval_jet(n.args.front(), c, x, order, needed);
    for (std::size_t i = 1; i < n.args.size(); ++i) r += eval_jet(n.args[i], c, x, order, needed);
    return r;
  }
  Jet operator()(const ProductNode& n) const {
    Jet r = eval_jet(n.args.front(), c, x, order, 0);
    for (std::size_t i = 1; i < n.args.size(); ++i) r *= eval_jet(n.args[i], c, x, order, 0);
    return r;
  }
  Jet operator()(const ScaleNode& n) const {
    if (n.c == 0.0) return Jet::constant(0.0, order);
    return n.c * eval_jet(n.arg, c, x, order, needed);
  }
  Jet operator()(const DerivativeNode& n) const {
    Jet j = eval_jet(n.arg, c, x, order + n.order, needed + n.order);
    for (int i = 0; i < n.order; ++i) j = j.differentiated();
    return j;
  }
  Jet operator()(const ComposeNode& n) const { return n.outer.compose(eval_jet(n.arg, c, x, order, 0)); }
};

Jet eval_jet(const Expr& e, const Ctx& c, double x, int order, int needed) {
  return std::visit(JetEval{c, x, order, needed}, e.node().v);
}

}  // namespace

int analytic_derivative_order(const Expr& e, const Mollifier& m) { return capability(e, m); }

Representative::Representative(Expr expr, Mollifier mollifier, Interval domain, EvalOptions options)
    : expr_(std::move(expr)), mollifier_(std::move(mollifier)), domain_(domain), options_(options) {
  if (!(domain_.lo < domain_.hi)) throw InvalidArgument("Representative: empty domain");
  if (!(options_.quad_tol > 0.0) || !(options_.h_rel > 0.0)) {
    throw InvalidArgument("Representative: tolerances must be positive");
  }
}

Jet Representative::jet(double eps, double x, int order) const { return jet_from(eps, x, order, 0); }

Jet Representative::jet_from(double eps, double x, int order, int needed) const {
  check_eps(eps);
  if (!domain_.contains(x)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside the domain [" << domain_.lo << ", " << domain_.hi << "]";
    throw InvalidArgument(msg.str());
  }
  if (order < 0) throw InvalidArgument("Representative::jet: negative order");
  const Ctx c{mollifier_, eps, options_};
  return eval_jet(expr_, c, x, order, needed);
}

double Representative::derivative(int alpha, double eps, double x) const {
  return jet_from(eps, x, alpha, alpha).derivative(alpha);
}

double eval_repr(const Representative& rep, double eps, double x) { return rep(eps, x); }

double embed_eval(const Dist& dist, const Mollifier& m, double eps, double x, const EvalOptions& options) {
  return embed_derivative_eval(dist, m, 0, eps, x, DerivativeRoute::analytic, options);
}

double embed_derivative_eval(const Dist& dist, const Mollifier& m, int k, double eps, double x,
                             DerivativeRoute route, const EvalOptions& options) {
  check_eps(eps);
  if (k < 0) throw InvalidArgument("embed_derivative_eval: negative order");
  const Ctx c{m, eps, options};
  if (k > leaf_capability(dist, m)) return leaf_jet(c, dist, x, k).derivative(k);
  if (route == DerivativeRoute::convolution) {
    if (k > m.max_derivative_order() && dist.tag() != DistTag::polynomial && dist.tag() != DistTag::smooth &&
        dist.tag() != DistTag::smooth_test) {
      throw InvalidArgument("embed_derivative_eval: mollifier derivative order exceeded");
    }
    return convolution_route(c, dist, k, x);
  }
  return analytic_route(c, dist, k, x);
}

double smooth_embedding_residual(const Smooth& f, const Mollifier& m, double eps, double x,
                                 const EvalOptions& options) {
  check_eps(eps);
  const Ctx c{m, eps, options};
  return residual_derivative(c, f, 0, x);
}

}  // namespace colombeau
