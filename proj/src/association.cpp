#include "colombeau/association.hpp"

#include "colombeau/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace colombeau {

std::vector<TestFunction> default_probes() {
  return {{0.0, 1.0, 1.0},  {0.25, 0.5, 1.0}, {-0.4, 1.2, 1.0}, {0.7, 2.0, 1.0},
          {-1.5, 2.5, 1.0}, {3.0, 4.0, 1.0},  {-6.0, 4.0, 1.0}};
}

std::string to_string(PairingStatus s) {
  switch (s) {
    case PairingStatus::converged: return "converged";
    case PairingStatus::divergent: return "divergent";
    case PairingStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

std::string to_string(Association a) {
  switch (a) {
    case Association::associated: return "associated";
    case Association::not_associated: return "not_associated";
    case Association::indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

/// Looser than the requested tolerance; pairings of noisy integrands are accepted up to here.
constexpr double kPairFailureL1 = 1e-8;

std::vector<double> eps_breakpoints(const std::vector<double>& points, double eps, double a, double b) {
  std::vector<double> out;
  for (double s : points) {
    for (double k : {0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0}) {
      const double z = s + k * eps;
      if (z > a && z < b) out.push_back(z);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadResult checked(const QuadResult& r, const char* what) {
  if (!r.acceptable()) {
    std::ostringstream msg;
    msg << what << ": quadrature did not converge (estimate " << r.value << ", error " << r.error_estimate << ")";
    throw NumericalFailure(msg.str());
  }
  return r;
}

/// Power p with (e1^p - e2^p) / (e0^p - e1^p) = rho; the left side decreases in p.
std::optional<double> solve_power(double e0, double e1, double e2, double rho, double p_lo, double p_hi) {
  auto f = [&](double p) {
    const double a = std::pow(e0, p), b = std::pow(e1, p), c = std::pow(e2, p);
    return (b - c) / (a - b);
  };
  if (!(rho > 0.0) || !(rho < f(p_lo)) || !(rho > f(p_hi))) return std::nullopt;
  double lo = p_lo, hi = p_hi;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > rho ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Window {
  double p;
  double limit;
  double coefficient;
};

}  // namespace

QuadResult pair_value(const Representative& rep, const TestFunction& T, double eps, const PairOptions& options) {
  if (!(T.radius > 0.0)) throw InvalidArgument("pair: test function radius must be positive");
  const double a = T.center - T.radius, b = T.center + T.radius;
  if (!rep.domain().contains(Interval{a, b})) {
    std::ostringstream msg;
    msg << "pair: test function support [" << a << ", " << b << "] not inside the domain";
    throw InvalidArgument(msg.str());
  }
  const auto breaks = eps_breakpoints(options.singular_points, eps, a, b);
  auto integrand = [&](double x) {
    const double t = T(x);
    return t == 0.0 ? 0.0 : rep(eps, x) * t;
  };
  QuadOptions qo{options.quad_abs_tol, options.quad_rel_tol, 4000, options.quad_rel_tol};
  QuadResult r = integrate(integrand, a, b, qo, breaks);
  const double l1 = r.roundoff_estimate / (50.0 * std::numeric_limits<double>::epsilon());
  if (!r.acceptable() && r.error_estimate <= kPairFailureL1 * l1) r.converged = true;
  return checked(r, "pair");
}

namespace {

PairingResult extrapolate_level(std::vector<double> eps, std::vector<double> values, std::vector<double> errors,
                                const PairOptions& o, int depth);

/// Values with the eps^p term removed between neighbouring rungs.
PairingResult eliminate_and_extrapolate(const PairingResult& in, double p, const PairOptions& o, int depth) {
  std::vector<double> e, v, err;
  for (std::size_t k = 0; k + 1 < in.values.size(); ++k) {
    const double a = std::pow(in.eps[k], p), b = std::pow(in.eps[k + 1], p);
    e.push_back(in.eps[k + 1]);
    v.push_back((a * in.values[k + 1] - b * in.values[k]) / (a - b));
    err.push_back((a + b) / (a - b) * (in.errors[k] + in.errors[k + 1]));
  }
  return extrapolate_level(std::move(e), std::move(v), std::move(err), o, depth);
}

PairingResult extrapolate_level(std::vector<double> eps, std::vector<double> values, std::vector<double> errors,
                                const PairOptions& o, int depth) {
  const std::size_t n = values.size();
  if (eps.size() != n || errors.size() != n) throw InvalidArgument("extrapolate: size mismatch");
  if (n < 4) throw InvalidArgument("extrapolate: at least four rungs required");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(eps[i] < eps[i - 1])) throw InvalidArgument("extrapolate: eps must decrease");
  }
  PairingResult out;
  out.eps = std::move(eps);
  out.values = std::move(values);
  out.errors = std::move(errors);
  const auto& e = out.eps;
  const auto& v = out.values;

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) {
      out.note = "non-finite pairing value";
      return out;
    }
  }

  auto noise = [&](std::size_t k) { return std::max(out.errors[k], 1e-15 * std::max(1.0, std::abs(v[k]))); };
  auto floor = [&](std::size_t k) {
    return std::max(o.cauchy_tol * std::max(1.0, std::abs(v[k + 1])), 4.0 * (noise(k) + noise(k + 1)));
  };

  bool cauchy = true;
  double spread = 0.0;
  for (std::size_t k = n - 4; k + 1 < n; ++k) {
    const double d = std::abs(v[k] - v[k + 1]);
    cauchy = cauchy && d <= floor(k);
    spread = std::max(spread, d);
  }
  if (cauchy) {
    out.status = PairingStatus::converged;
    out.limit = v[n - 1];
    out.limit_error = spread + noise(n - 1);
    out.note = "Cauchy tail";
    return out;
  }

  bool growing = true;
  for (std::size_t k = n - 4; k + 1 < n; ++k) {
    growing = growing && std::abs(v[k + 1]) > std::abs(v[k]) && v[k] != 0.0 && (v[k] > 0.0) == (v[k + 1] > 0.0);
  }
  if (growing) {
    Eigen::Matrix<double, 4, 2> A;
    Eigen::Vector4d y;
    for (int i = 0; i < 4; ++i) {
      const std::size_t k = n - 4 + i;
      A(i, 0) = 1.0;
      A(i, 1) = std::log(e[k]);
      y(i) = std::log(std::abs(v[k]));
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    if (c(1) <= -o.divergence_slope) {
      out.status = PairingStatus::divergent;
      out.divergence_exponent = -c(1);
      out.divergence_constant = std::copysign(std::exp(c(0)), v[n - 1]);
      out.note = "values grow like C eps^-a";
      return out;
    }
  }

  auto window = [&](std::size_t i) -> std::optional<Window> {
    const double d1 = v[i] - v[i + 1], d2 = v[i + 1] - v[i + 2];
    if (std::abs(d1) <= floor(i) || std::abs(d2) <= floor(i + 1)) return std::nullopt;
    const auto p = solve_power(e[i], e[i + 1], e[i + 2], d2 / d1, o.p_min, o.p_max);
    if (!p) return std::nullopt;
    const double b = std::pow(e[i + 1], *p), c = std::pow(e[i + 2], *p);
    const double C = d2 / (b - c);
    return Window{*p, v[i + 2] - C * c, C};
  };

  for (std::size_t j = n - 1; j >= 3; --j) {
    const auto w2 = window(j - 2), w1 = window(j - 3);
    if (!w2 || !w1 || std::abs(w2->p - w1->p) > o.p_stability * std::max(1.0, w2->p)) continue;
    const double jump = std::abs(w2->limit - w1->limit);
    double later = 0.0, later_floor = 0.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      later = std::max(later, std::abs(v[k] - w2->limit - w2->coefficient * std::pow(e[k], w2->p)));
      later_floor = std::max(later_floor, floor(k - 1));
    }
    if (later > 10.0 * std::max(jump, later_floor)) break;
    out.status = PairingStatus::converged;
    out.limit = w2->limit;
    out.limit_error = jump + later + noise(j);
    out.correction_power = w2->p;
    std::ostringstream note;
    note << "Richardson over rungs " << j - 3 << ".." << j;
    out.note = note.str();
    if (depth == 0 && n >= 5) {
      // Snap p to a nearby integer.
      const double p_int = std::round(w2->p);
      const double p_elim = std::abs(w2->p - p_int) <= 0.05 && p_int >= 1.0 ? p_int : w2->p;
      const auto next = eliminate_and_extrapolate(out, p_elim, o, depth + 1);
      if (next.status == PairingStatus::converged && next.limit_error < out.limit_error &&
          std::abs(*next.limit - *out.limit) <= out.limit_error + next.limit_error) {
        out.limit = next.limit;
        out.limit_error = next.limit_error;
        out.note += ", then " + next.note + " after removing eps^p";
      }
    }
    return out;
  }
  out.note = "no stable correction power";
  return out;
}

}  // namespace

PairingResult extrapolate(std::vector<double> eps, std::vector<double> values, std::vector<double> errors,
                          const PairOptions& o) {
  return extrapolate_level(std::move(eps), std::move(values), std::move(errors), o, 0);
}

PairingResult pair(const Representative& rep, const TestFunction& T, const EpsLadder& ladder,
                   const PairOptions& options) {
  std::vector<double> values, errors;
  for (double eps : ladder.values()) {
    const auto r = pair_value(rep, T, eps, options);
    values.push_back(r.value);
    errors.push_back(r.error_estimate);
  }
  return extrapolate(ladder.values(), std::move(values), std::move(errors), options);
}

AssociationResult associated(const Representative& g, const Representative& h, const AssociationOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("associated: tol must be positive");
  if (g.mollifier().kind() != h.mollifier().kind() || g.mollifier().order() != h.mollifier().order() ||
      !(g.domain() == h.domain())) {
    throw InvalidArgument("associated: representatives must share mollifier and domain");
  }
  const Representative diff(sum({g.expr(), scale(-1.0, h.expr())}), g.mollifier(), g.domain(), g.options());
  AssociationResult out;
  out.tol = options.tol;
  out.probes = options.probes;
  bool any_false = false, any_unknown = false;
  for (const auto& T : options.probes) {
    auto r = pair(diff, T, options.ladder, options.pair);
    if (r.status == PairingStatus::divergent) {
      any_false = true;
    } else if (r.status == PairingStatus::indeterminate) {
      any_unknown = true;
    } else if (std::abs(*r.limit) > options.tol) {
      (std::abs(*r.limit) - r.limit_error > options.tol ? any_false : any_unknown) = true;
    }
    out.pairings.push_back(std::move(r));
  }
  out.verdict = any_false ? Association::not_associated
                          : (any_unknown ? Association::indeterminate : Association::associated);
  return out;
}

std::vector<PairingResult> shadow_report(const Representative& g, const std::vector<TestFunction>& probes,
                                         const EpsLadder& ladder, const PairOptions& options) {
  std::vector<PairingResult> out;
  for (const auto& T : probes) out.push_back(pair(g, T, ladder, options));
  return out;
}

double classical_pairing(const Dist& d, const TestFunction& T, double tol) {
  const double a = T.center - T.radius, b = T.center + T.radius;
  if (d.tag() == DistTag::delta) return T(0.0);
  const QuadOptions qo{tol, tol, 4000};
  auto f = [&d, &T](double x) { return d.classical(x) * T(x); };
  if (d.tag() == DistTag::pv_inverse && a < 0.0 && b > 0.0) {
    return checked(integrate_pv(f, 0.0, a, b, qo), "classical_pairing").value;
  }
  std::vector<double> breaks;
  if (a < 0.0 && b > 0.0) breaks.push_back(0.0);
  return checked(integrate(f, a, b, qo, breaks), "classical_pairing").value;
}

namespace {

/// int rep(eps, x) dx over the eps-scaled support of the mollifier.
double integrate_scaled(const Expr& e, const Mollifier& m, double eps, const char* what) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument(std::string(what) + ": eps must lie in (0, 1)");
  const double R = std::min(m.truncation_radius(1e-16), m.grid_limit());
  const double L = R * eps;
  const Representative rep(e, m, Interval{-L - 1.0, L + 1.0});
  std::vector<double> breaks = eps_breakpoints({0.0}, eps, -L, L);
  for (double z = -R + 4.0; z < R; z += 4.0) breaks.push_back(z * eps);
  std::sort(breaks.begin(), breaks.end());
  const QuadOptions qo{1e-15, 1e-13, 4000};
  return checked(integrate([&](double x) { return rep(eps, x); }, -L, L, qo, breaks), what).value;
}

double mean(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size())).mean();
}

double stddev(const std::vector<double>& v) {
  const Eigen::Map<const Eigen::ArrayXd> a(v.data(), static_cast<Eigen::Index>(v.size()));
  return v.size() < 2 ? 0.0 : std::sqrt((a - a.mean()).square().sum() / static_cast<double>(v.size() - 1));
}

}  // namespace

double h2h_integral(const Mollifier& m, double eps) {
  const Expr H = embed(Dist::heaviside());
  const Expr e = product({sum({product({H, H}), scale(-1.0, H)}), derivative(1, H)});
  return integrate_scaled(e, m, eps, "h2h_integral");
}

IdentityReport exact_identity_check_H2H(const Mollifier& m, const EpsLadder& ladder) {
  IdentityReport out;
  out.eps = ladder.values();
  for (double eps : out.eps) {
    const double v = h2h_integral(m, eps);
    out.values.push_back(v);
    out.max_deviation = std::max(out.max_deviation, std::abs(v + 1.0 / 6.0));
  }
  out.mean = mean(out.values);
  out.stddev = stddev(out.values);
  return out;
}

double self_energy(const Mollifier& m, double eps, double charge) {
  if (!std::isfinite(charge)) throw InvalidArgument("self_energy: charge must be finite");
  const Expr d = embed(Dist::delta());
  return 0.5 * charge * charge * integrate_scaled(product({d, d}), m, eps, "self_energy");
}

SelfEnergyReport self_energy_scan(const Mollifier& m, const EpsLadder& ladder, double charge) {
  SelfEnergyReport out;
  out.eps = ladder.values();
  for (double eps : out.eps) {
    const double u = self_energy(m, eps, charge);
    out.energy.push_back(u);
    out.scaled.push_back(eps * u);
    out.max_spread = std::max(out.max_spread, std::abs(eps * u - out.scaled.front()));
  }
  return out;
}

ImpossibilityReport impossibility_demo(const Mollifier& m, const TestFunction& T, const EpsLadder& ladder,
                                       const AssociationOptions& options) {
  const Expr x = coordinate(), p = embed(Dist::pv_inverse()), d = embed(Dist::delta());
  const Interval domain{};
  const EvalOptions eval{1e-12, 1e-3};
  auto rep = [&](const Expr& e) { return Representative(e, m, domain, eval); };

  ImpossibilityReport out;
  out.x_pv_minus_one = pair(rep(sum({product({x, p}), scale(-1.0, one())})), T, ladder, options.pair);
  out.x_delta = pair(rep(product({x, d})), T, ladder, options.pair);
  out.triple = pair(rep(product({product({x, p}), d})), T, ladder, options.pair);
  auto near_zero = [&](const PairingResult& r) {
    return r.status == PairingStatus::converged && std::abs(*r.limit) <= options.tol;
  };
  out.x_pv_associates_one = near_zero(out.x_pv_minus_one);
  out.x_delta_associates_zero = near_zero(out.x_delta);
  if (out.triple.status == PairingStatus::converged && T(0.0) != 0.0) out.triple_constant = *out.triple.limit / T(0.0);

  const Representative left = rep(product({product({x, p}), d})), right = rep(product({x, product({p, d})}));
  const int points = 65;
  for (std::size_t r = 0; r < std::min<std::size_t>(3, ladder.size()); ++r) {
    for (int i = 0; i < points; ++i) {
      const double xi = T.center - T.radius + 2.0 * T.radius * (i + 0.5) / points;
      const double a = left(ladder[r], xi), b = right(ladder[r], xi);
      const double scale_ab = std::max(std::abs(a), std::abs(b));
      if (scale_ab > 0.0) out.parenthesization_gap = std::max(out.parenthesization_gap, std::abs(a - b) / scale_ab);
      ++out.samples;
    }
  }
  return out;
}

}  // namespace colombeau
