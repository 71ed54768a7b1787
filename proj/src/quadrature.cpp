#include "colombeau/quadrature.hpp"

#include "colombeau/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace colombeau {

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

namespace {

const GaussLegendreRule& rule15() {
  static const GaussLegendreRule rule = gauss_legendre(15);
  return rule;
}

struct PanelSum {
  double value;
  double abs_value;
  double spread;  // integral of |f - mean|
};

PanelSum panel(const RealFunction& f, double a, double b) {
  const auto& r = rule15();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  std::array<double, 15> fv;
  double s = 0.0, sa = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    fv[i] = f(mid + half * r.nodes[i]);
    s += fv[i] * r.weights[i];
    sa += std::abs(fv[i]) * r.weights[i];
  }
  const double mean = 0.5 * s;
  double sp = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) sp += std::abs(fv[i] - mean) * r.weights[i];
  return {s * half, sa * std::abs(half), sp * std::abs(half)};
}

struct Interval {
  double a, b;
  double value;     // two-half refined estimate
  double error;     // |whole - halves|
  double roundoff;
  PanelSum left, right;
  bool operator<(const Interval& o) const { return error < o.error; }
};

Interval evaluate(const RealFunction& f, double a, double b, const PanelSum& whole) {
  const double m = 0.5 * (a + b);
  const auto left = panel(f, a, m);
  const auto right = panel(f, m, b);
  const double refined = left.value + right.value;
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * (left.abs_value + right.abs_value);
  double err = std::abs(whole.value - refined);
  const double spread = left.spread + right.spread;
  if (spread > 0.0) err = std::max(err, spread * std::min(1.0, std::pow(200.0 * err / spread, 1.5)));
  if (!std::isfinite(refined)) err = std::numeric_limits<double>::infinity();
  return {a, b, refined, err, roundoff, left, right};
}

Interval evaluate(const RealFunction& f, double a, double b) { return evaluate(f, a, b, panel(f, a, b)); }

}  // namespace

double gauss_legendre_15(const RealFunction& f, double a, double b) { return panel(f, a, b).value; }

QuadResult integrate(const RealFunction& f, double a, double b, const QuadOptions& opts,
                     std::span<const double> breakpoints) {
  if (!(a < b)) {
    if (a == b) return {0.0, 0.0, 0, true, 0.0};
    throw InvalidArgument("integrate: require a < b");
  }
  if (!(opts.abs_tol >= 0.0) || !(opts.rel_tol >= 0.0) || !(opts.l1_rel_tol >= 0.0) ||
      (opts.abs_tol == 0.0 && opts.rel_tol == 0.0 && opts.l1_rel_tol == 0.0)) {
    throw InvalidArgument("integrate: tolerance must be positive");
  }

  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > edges.back() && p < b) edges.push_back(p);
  }
  edges.push_back(b);

  std::vector<Interval> heap;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) heap.push_back(evaluate(f, edges[i], edges[i + 1]));
  std::make_heap(heap.begin(), heap.end());

  double value = 0.0, error = 0.0, roundoff = 0.0;
  auto recompute = [&] {
    value = error = roundoff = 0.0;
    for (const auto& iv : heap) {
      value += iv.value;
      error += iv.error;
      roundoff += iv.roundoff;
    }
  };
  recompute();
  int subdivisions = static_cast<int>(heap.size());
  const double l1_per_roundoff = 1.0 / (50.0 * std::numeric_limits<double>::epsilon());
  auto target = [&] {
    return std::max({opts.abs_tol, opts.rel_tol * std::abs(value), opts.l1_rel_tol * roundoff * l1_per_roundoff});
  };

  while (error + roundoff > target() && subdivisions < opts.max_subdivisions) {
    std::pop_heap(heap.begin(), heap.end());
    const Interval worst = heap.back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b) || worst.error <= worst.roundoff) break;
    heap.pop_back();
    const Interval left = evaluate(f, worst.a, m, worst.left), right = evaluate(f, m, worst.b, worst.right);
    for (const auto& iv : {left, right}) {
      heap.push_back(iv);
      std::push_heap(heap.begin(), heap.end());
    }
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    roundoff += left.roundoff + right.roundoff - worst.roundoff;
    ++subdivisions;
    if (subdivisions % 64 == 0) recompute();
  }
  recompute();

  QuadResult out;
  out.value = value;
  out.error_estimate = error + roundoff;
  out.roundoff_estimate = roundoff;
  out.subdivisions = subdivisions;
  out.converged = std::isfinite(value) && out.error_estimate <= target();
  return out;
}

QuadResult integrate(const RealFunction& f, double a, double b, double tol) {
  return integrate(f, a, b, QuadOptions{tol, 0.0, 4000});
}

double envelope_tail(const DecayEnvelope& envelope, double radius) {
  // Sum geometric shells [R 2^k, R 2^(k+1)] until a shell stops contributing.
  double lo = std::max(radius, 1e-3), total = 0.0;
  if (radius < 1e-3) total += gauss_legendre_15(envelope.bound, radius, lo);
  for (int k = 0; k < 60; ++k) {
    const double hi = 2.0 * lo;
    const double shell = gauss_legendre_15(envelope.bound, lo, 0.5 * (lo + hi)) +
                         gauss_legendre_15(envelope.bound, 0.5 * (lo + hi), hi);
    total += shell;
    lo = hi;
    if (shell <= 1e-3 * total && envelope.bound(hi) * hi <= 1e-3 * total) break;
    if (total == 0.0 && envelope.bound(hi) == 0.0) break;
  }
  return 2.0 * total;
}

QuadResult integrate_decaying(const RealFunction& f, const DecayEnvelope& envelope, double tol,
                              std::span<const double> breakpoints) {
  if (!(tol > 0.0)) throw InvalidArgument("integrate_decaying: tol must be positive");
  double radius = 1.0;
  while (envelope_tail(envelope, radius) >= 0.5 * tol) {
    radius *= 1.25;
    if (radius > 1e8) throw InvalidArgument("integrate_decaying: envelope tail bound not achievable");
  }
  auto res = integrate(f, -radius, radius, QuadOptions{0.5 * tol, 0.0, 4000}, breakpoints);
  res.error_estimate += envelope_tail(envelope, radius);
  return res;
}

QuadResult integrate_pv(const RealFunction& f, double s, double a, double b, const QuadOptions& opts) {
  if (!(a < s && s < b)) throw InvalidArgument("integrate_pv: require a < singularity < b");
  const double d = std::min(s - a, b - s);
  auto sym = [&f, s](double t) { return f(s + t) + f(s - t); };
  QuadOptions part = opts;
  part.abs_tol = 0.5 * opts.abs_tol;
  auto core = integrate(sym, 0.0, d, part);
  if (!core.acceptable()) {
    std::ostringstream msg;
    msg << "integrate_pv: symmetrized integrand did not converge near singularity " << s
        << " (estimate " << core.value << ", error " << core.error_estimate << ")";
    throw NumericalFailure(msg.str());
  }
  QuadResult rest{0.0, 0.0, 0, true, 0.0};
  if (s - a > d) {
    rest = integrate(f, a, s - d, part);
  } else if (b - s > d) {
    rest = integrate(f, s + d, b, part);
  }
  QuadResult out;
  out.value = core.value + rest.value;
  out.error_estimate = core.error_estimate + rest.error_estimate;
  out.roundoff_estimate = core.roundoff_estimate + rest.roundoff_estimate;
  out.subdivisions = core.subdivisions + rest.subdivisions;
  out.converged = core.converged && rest.converged;
  return out;
}

QuadResult integrate_pv(const RealFunction& f, double s, double a, double b, double tol) {
  return integrate_pv(f, s, a, b, QuadOptions{tol, 0.0, 4000});
}

}  // namespace colombeau
