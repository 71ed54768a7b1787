#include "colombeau/mollifier.hpp"

#include "colombeau/errors.hpp"
#include "colombeau/jet.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

namespace colombeau {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussianMaxDerivative = 16;

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

}  // namespace

namespace detail {

struct GaussianData {
  std::vector<double> coeffs;                 // P(t), t = x^2
  std::vector<std::vector<double>> deriv;     // Q_n(x), eta^(n) = Q_n exp(-x^2)
  std::vector<double> even_moments;           // m_{2k}
  std::vector<double> envelope_peaks;         // max_t t^{2j} exp(-t^2)
};

struct PlateauData {
  double a = 0.0, b = 0.0;
  PlateauGridSpec spec;
  int points = 0;
  std::vector<std::vector<double>> grid;      // grid[j][i] = eta^(j)(i h)
  std::vector<double> cumulative;             // int_0^{x_i} eta
  std::vector<double> envelope;               // non-increasing bound at x_i
  std::vector<double> envelope_tail;          // int_{x_i}^inf envelope
  std::vector<double> far_constants;          // |eta| <= C_L (1 + x)^-L beyond the grid, L = 8..16
};

}  // namespace detail

namespace {

constexpr int kMinBoundOrder = 8;
constexpr int kMaxBoundOrder = 16;

double far_bound(const detail::PlateauData& d, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (int L = kMinBoundOrder; L <= kMaxBoundOrder; ++L) best = std::min(best, d.far_constants[L] * std::pow(1.0 + x, -L));
  return best;
}

// Integral of far_bound over [x, inf).
double far_tail(const detail::PlateauData& d, double x) {
  double best = std::numeric_limits<double>::infinity();
  for (int L = kMinBoundOrder; L <= kMaxBoundOrder; ++L) {
    best = std::min(best, d.far_constants[L] * std::pow(1.0 + x, 1 - L) / (L - 1));
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------- moment family

Mollifier make_moment_mollifier(int q, int q_max) {
  if (q < 0 || q % 2 != 0) throw InvalidArgument("make_moment_mollifier: q must be even and non-negative");
  if (q > q_max) {
    std::ostringstream msg;
    msg << "make_moment_mollifier: q = " << q << " exceeds q_max = " << q_max;
    throw InvalidArgument(msg.str());
  }
  const auto sol = solve_moment_coefficients<long double>(q);
  if (sol.size() == 0) throw NumericalFailure("make_moment_mollifier: singular moment matrix");

  auto data = std::make_shared<detail::GaussianData>();
  data->coeffs.resize(sol.size());
  for (Eigen::Index j = 0; j < sol.size(); ++j) data->coeffs[j] = static_cast<double>(sol(j));

  std::vector<double> q0(2 * data->coeffs.size() - 1, 0.0);
  for (std::size_t j = 0; j < data->coeffs.size(); ++j) q0[2 * j] = data->coeffs[j];
  data->deriv.push_back(q0);
  for (int n = 1; n <= kGaussianMaxDerivative; ++n) {
    const auto& prev = data->deriv.back();
    std::vector<double> next(prev.size() + 1, 0.0);
    for (std::size_t k = 1; k < prev.size(); ++k) next[k - 1] += k * prev[k];
    for (std::size_t k = 0; k < prev.size(); ++k) next[k + 1] -= 2.0 * prev[k];
    data->deriv.push_back(std::move(next));
  }

  for (int k = 0; k <= q / 2 + 4; ++k) {
    long double s = 0.0L;
    for (Eigen::Index j = 0; j < sol.size(); ++j) s += sol(j) * std::tgamma(static_cast<long double>(j + k) + 0.5L);
    data->even_moments.push_back(static_cast<double>(s));
  }
  for (std::size_t j = 0; j < data->coeffs.size(); ++j) {
    data->envelope_peaks.push_back(j == 0 ? 1.0 : std::pow(double(j), double(j)) * std::exp(-double(j)));
  }

  Mollifier m;
  m.kind_ = MollifierKind::moment_gaussian;
  m.order_ = q;
  m.gaussian_ = std::move(data);
  return m;
}

// ---------------------------------------------------------------- plateau family

double plateau_profile(double p, double plateau_radius, double cutoff_radius) {
  const double ap = std::abs(p);
  if (ap <= plateau_radius) return 1.0;
  if (ap >= cutoff_radius) return 0.0;
  const double t = (ap - plateau_radius) / (cutoff_radius - plateau_radius);
  const double y = 1.0 / t - 1.0 / (1.0 - t);
  return y >= 0 ? 1.0 / (1.0 + std::exp(-y)) : std::exp(y) / (1.0 + std::exp(y));
}

namespace {

/// Derivatives g^(0..order) of the plateau profile at p inside the transition band.
Jet transition_jet(double p, double a, double b, int order) {
  const double w = b - a;
  const Jet t = Jet::variable((p - a) / w, order);
  Jet s = logistic(reciprocal(t) - reciprocal(1.0 - t));
  // Chain rule for t = (p - a) / w.
  Jet::Coefficients c = s.coefficients();
  double scale = 1.0;
  for (int k = 0; k <= order; ++k, scale /= w) c(k) *= scale;
  return Jet(c);
}

struct Panels {
  std::vector<double> nodes, weights;
};

void add_panels(Panels& out, double lo, double hi, int count) {
  const auto rule = gauss_legendre(15);
  const double width = (hi - lo) / count;
  for (int k = 0; k < count; ++k) {
    const double a = lo + k * width, half = 0.5 * width, mid = a + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      out.nodes.push_back(mid + half * rule.nodes[i]);
      out.weights.push_back(half * rule.weights[i]);
    }
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Quintic Hermite basis on [0, 1] matching value, first and second derivative at both ends.
struct Quintic {
  double h[6];
  explicit Quintic(double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    h[0] = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    h[1] = s - 6 * s3 + 8 * s4 - 3 * s5;
    h[2] = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    h[3] = 10 * s3 - 15 * s4 + 6 * s5;
    h[4] = -4 * s3 + 7 * s4 - 3 * s5;
    h[5] = 0.5 * (s3 - 2 * s4 + s5);
  }
};

// Antiderivatives of the quintic basis, vanishing at s = 0.
struct QuinticIntegral {
  double h[6];
  explicit QuinticIntegral(double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s, s6 = s5 * s;
    h[0] = s - 2.5 * s4 + 3 * s5 - s6;
    h[1] = 0.5 * s2 - 1.5 * s4 + 1.6 * s5 - 0.5 * s6;
    h[2] = 0.5 * (s3 / 3 - 0.75 * s4 + 0.6 * s5 - s6 / 6);
    h[3] = 2.5 * s4 - 3 * s5 + s6;
    h[4] = -s4 + 1.4 * s5 - 0.5 * s6;
    h[5] = 0.5 * (0.25 * s4 - 0.4 * s5 + s6 / 6);
  }
};

// (1/pi) Re sum_m C(j, m) D^(j-m)[(i/x)^K] J^(m)(x) for x > 0.
double far_field_derivative(int j, int K, double x, const ComplexVector& J) {
  Complex iK(1.0, 0.0);
  for (int k = 0; k < K; ++k) iK *= Complex(0.0, 1.0);
  Complex total(0.0, 0.0);
  for (int m = 0; m <= j; ++m) {
    const int r = j - m;
    double rising = 1.0;
    for (int k = 0; k < r; ++k) rising *= (K + k);
    const double dx = ((r % 2) ? -1.0 : 1.0) * rising * std::pow(x, -(K + r));
    total += binomial(j, m) * dx * iK * J(m);
  }
  return total.real() / kPi;
}

}  // namespace

Mollifier make_ft_plateau_mollifier(double plateau_radius, double cutoff_radius, const PlateauGridSpec& spec) {
  if (!(plateau_radius > 0.0) || !(cutoff_radius > plateau_radius) || !std::isfinite(cutoff_radius)) {
    throw InvalidArgument("make_ft_plateau_mollifier: require 0 < plateau_radius < cutoff_radius");
  }
  if (!(spec.spacing > 0.0) || !(spec.direct_limit > 0.0) || !(spec.x_max > spec.direct_limit) ||
      spec.ibp_order < 1 || spec.derivative_grids < 2) {
    throw InvalidArgument("make_ft_plateau_mollifier: invalid grid specification");
  }
  const double a = plateau_radius, b = cutoff_radius, w = b - a;
  const int K = spec.ibp_order, J = spec.derivative_grids;

  auto data = std::make_shared<detail::PlateauData>();
  data->a = a;
  data->b = b;
  data->spec = spec;

  // Transition panels resolve about 6 rad of phase at the far edge of the grid.
  const int transition_panels = std::max(16, static_cast<int>(std::ceil(w * spec.x_max / 6.0)));
  Panels transition;
  add_panels(transition, a, b, transition_panels);
  Panels full;
  add_panels(full, 0.0, a, std::max(2, static_cast<int>(std::ceil(a * spec.direct_limit / 6.0))));
  full.nodes.insert(full.nodes.end(), transition.nodes.begin(), transition.nodes.end());
  full.weights.insert(full.weights.end(), transition.weights.begin(), transition.weights.end());

  const int jet_order = std::max(K, kMaxBoundOrder);
  std::vector<double> g_norms(kMaxBoundOrder + 1, 0.0);
  std::vector<double> g_transition(transition.nodes.size()), far_weights(transition.nodes.size());
  for (std::size_t i = 0; i < transition.nodes.size(); ++i) {
    const Jet g = transition_jet(transition.nodes[i], a, b, jet_order);
    g_transition[i] = g.value();
    far_weights[i] = transition.weights[i] * g.derivative(K);
    for (int L = kMinBoundOrder; L <= kMaxBoundOrder; ++L) {
      g_norms[L] += transition.weights[i] * std::abs(g.derivative(L));
    }
  }

  const auto n_nodes = static_cast<Eigen::Index>(full.nodes.size());
  ComplexMatrix near(J + 1, n_nodes);
  for (Eigen::Index i = 0; i < n_nodes; ++i) {
    const double p = full.nodes[i];
    const double g = i < n_nodes - static_cast<Eigen::Index>(transition.nodes.size())
                         ? 1.0
                         : g_transition[i - (n_nodes - static_cast<Eigen::Index>(transition.nodes.size()))];
    Complex f = full.weights[i] * g;
    for (int j = 0; j <= J; ++j, f *= Complex(0.0, p)) near(j, i) = f;
  }
  const auto n_far = static_cast<Eigen::Index>(transition.nodes.size());
  ComplexMatrix far(J + 1, n_far);
  for (Eigen::Index i = 0; i < n_far; ++i) {
    const double p = transition.nodes[i];
    Complex f = far_weights[i];
    for (int j = 0; j <= J; ++j, f *= Complex(0.0, p)) far(j, i) = f;
  }

  const double h = spec.spacing;
  const int n = static_cast<int>(std::ceil(spec.x_max / h));
  data->points = n + 1;
  data->grid.assign(J + 1, std::vector<double>(n + 1, 0.0));

  ComplexVector phase(n_nodes);
  int i = 0;
  for (; i <= n && i * h <= spec.direct_limit; ++i) {
    const double x = i * h;
    for (Eigen::Index k = 0; k < n_nodes; ++k) phase(k) = std::polar(1.0, full.nodes[k] * x);
    const ComplexVector v = near * phase;
    for (int j = 0; j <= J; ++j) data->grid[j][i] = v(j).real() / kPi;
  }
  ComplexVector zf(n_far), step(n_far);
  for (Eigen::Index k = 0; k < n_far; ++k) step(k) = std::polar(1.0, transition.nodes[k] * h);
  for (int count = 0; i <= n; ++i, ++count) {
    const double x = i * h;
    if (count % 64 == 0) {
      for (Eigen::Index k = 0; k < n_far; ++k) zf(k) = std::polar(1.0, transition.nodes[k] * x);
    } else {
      zf = zf.cwiseProduct(step);
    }
    const ComplexVector Jv = far * zf;
    for (int j = 0; j <= J; ++j) data->grid[j][i] = far_field_derivative(j, K, x, Jv);
  }

  data->cumulative.assign(n + 1, 0.0);
  for (int c = 0; c < n; ++c) {
    const auto& g = data->grid;
    const double cell = h * (0.5 * (g[0][c] + g[0][c + 1]) + h * (g[1][c] - g[1][c + 1]) / 10.0 +
                             h * h * (g[2][c] + g[2][c + 1]) / 120.0);
    data->cumulative[c + 1] = data->cumulative[c] + cell;
  }

  const double edge = n * h;
  data->far_constants.assign(kMaxBoundOrder + 1, std::numeric_limits<double>::infinity());
  for (int L = kMinBoundOrder; L <= kMaxBoundOrder; ++L) {
    data->far_constants[L] = g_norms[L] / kPi * std::pow(1.0 + 1.0 / edge, L);
  }
  const double edge_bound = far_bound(*data, edge);
  data->envelope.assign(n + 1, 0.0);
  double running = edge_bound;
  for (int c = n; c >= 0; --c) {
    running = std::max(running, 1.5 * std::abs(data->grid[0][c]));
    data->envelope[c] = running;
  }
  data->envelope_tail.assign(n + 1, 0.0);
  double tail = far_tail(*data, edge);
  for (int c = n; c >= 0; --c) {
    data->envelope_tail[c] = tail;
    if (c > 0) tail += h * data->envelope[c - 1];
  }

  Mollifier m;
  m.kind_ = MollifierKind::ft_plateau;
  m.order_ = kInfiniteOrder;
  m.plateau_ = std::move(data);
  return m;
}

// ---------------------------------------------------------------- evaluation

int Mollifier::max_derivative_order() const {
  return kind_ == MollifierKind::moment_gaussian ? kGaussianMaxDerivative : plateau_->spec.derivative_grids - 2;
}

double Mollifier::derivative(int n, double x) const {
  if (n < 0 || n > max_derivative_order()) {
    std::ostringstream msg;
    msg << "Mollifier::derivative: order " << n << " outside [0, " << max_derivative_order() << "]";
    throw InvalidArgument(msg.str());
  }
  if (kind_ == MollifierKind::moment_gaussian) {
    if (std::abs(x) > 40.0) return 0.0;
    return horner(gaussian_->deriv[n], x) * std::exp(-x * x);
  }
  const auto& d = *plateau_;
  const double ax = std::abs(x);
  const double sign = (x < 0 && n % 2 == 1) ? -1.0 : 1.0;
  const double h = d.spec.spacing;
  // Beyond the grid eta^(n) is below the certified far bound and is truncated to 0.
  if (ax >= (d.points - 1) * h) return 0.0;
  const int c = std::min(static_cast<int>(ax / h), d.points - 2);
  const double s = (ax - c * h) / h;
  const Quintic q(s);
  const auto& g0 = d.grid[n];
  const auto& g1 = d.grid[n + 1];
  const auto& g2 = d.grid[n + 2];
  const double v = q.h[0] * g0[c] + q.h[1] * h * g1[c] + q.h[2] * h * h * g2[c] + q.h[3] * g0[c + 1] +
                   q.h[4] * h * g1[c + 1] + q.h[5] * h * h * g2[c + 1];
  return sign * v;
}

double Mollifier::tail_mass(double u) const {
  if (kind_ == MollifierKind::moment_gaussian) {
    if (u < 0) return 1.0 - tail_mass(-u);
    if (u > 40.0) return 0.0;
    const auto& c = gaussian_->coeffs;
    const double e = std::exp(-u * u);
    double k = 0.5 * std::sqrt(kPi) * std::erfc(u);
    double total = c[0] * k;
    double upow = u;  // u^(2j - 1)
    for (std::size_t j = 1; j < c.size(); ++j) {
      k = 0.5 * upow * e + 0.5 * (2.0 * j - 1.0) * k;
      total += c[j] * k;
      upow *= u * u;
    }
    return total;
  }
  const auto& d = *plateau_;
  const double h = d.spec.spacing;
  const double au = std::abs(u);
  double s;
  if (au >= (d.points - 1) * h) {
    s = d.cumulative.back();
  } else {
    const int c = static_cast<int>(au / h);
    const QuinticIntegral qi((au - c * h) / h);
    const auto& g = d.grid;
    s = d.cumulative[c] + h * (qi.h[0] * g[0][c] + qi.h[1] * h * g[1][c] + qi.h[2] * h * h * g[2][c] +
                               qi.h[3] * g[0][c + 1] + qi.h[4] * h * g[1][c + 1] + qi.h[5] * h * h * g[2][c + 1]);
  }
  return u >= 0 ? 0.5 - s : 0.5 + s;
}

double Mollifier::moment(int n) const {
  if (n < 0) throw InvalidArgument("Mollifier::moment: n must be non-negative");
  if (n == 0) return 1.0;
  if (n % 2 == 1 || kind_ == MollifierKind::ft_plateau || n <= order_) return 0.0;
  const int k = n / 2;
  const auto& c = gaussian_->coeffs;
  if (k < static_cast<int>(gaussian_->even_moments.size())) return gaussian_->even_moments[k];
  long double s = 0.0L;
  for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * std::tgamma(static_cast<long double>(j + k) + 0.5L);
  return static_cast<double>(s);
}

double Mollifier::fourier_transform(double p) const {
  if (kind_ == MollifierKind::ft_plateau) return plateau_profile(p, plateau_->a, plateau_->b);
  // FT of x^(2j) exp(-x^2) is sqrt(pi) (-1)^j 4^-j H_2j(p/2) exp(-p^2/4).
  const auto& c = gaussian_->coeffs;
  const double y = 0.5 * p;
  double h0 = 1.0, h1 = 2.0 * y, total = c[0];
  double scale = 1.0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    const int n0 = 2 * static_cast<int>(j) - 2;
    const double h2 = 2.0 * y * h1 - 2.0 * (n0 + 1) * h0;
    const double h3 = 2.0 * y * h2 - 2.0 * (n0 + 2) * h1;
    h0 = h2;
    h1 = h3;
    scale *= -0.25;
    total += c[j] * scale * h0;
  }
  return std::sqrt(kPi) * total * std::exp(-y * y);
}

double Mollifier::envelope(double x) const {
  const double ax = std::abs(x);
  if (kind_ == MollifierKind::moment_gaussian) {
    if (ax > 40.0) return 0.0;
    const auto& c = gaussian_->coeffs;
    const double t = ax * ax;
    const double e = std::exp(-t);
    double total = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double term = ax * ax < double(j) ? gaussian_->envelope_peaks[j] : std::pow(t, double(j)) * e;
      total += std::abs(c[j]) * term;
    }
    return total;
  }
  const auto& d = *plateau_;
  const double h = d.spec.spacing;
  if (ax >= (d.points - 1) * h) return far_bound(d, ax);
  return d.envelope[static_cast<int>(ax / h)];
}

DecayEnvelope Mollifier::decay_envelope() const {
  Mollifier self = *this;
  return DecayEnvelope{[self](double x) { return self.envelope(x); }};
}

double Mollifier::truncation_radius(double tol) const {
  if (!(tol > 0.0)) throw InvalidArgument("truncation_radius: tol must be positive");
  if (kind_ == MollifierKind::ft_plateau) {
    const auto& d = *plateau_;
    const double h = d.spec.spacing;
    const auto& tail = d.envelope_tail;
    if (2.0 * tail.back() >= tol) {
      double lo = grid_limit(), hi = 2.0 * lo;
      while (2.0 * far_tail(d, hi) >= tol) hi *= 2.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (2.0 * far_tail(d, mid) >= tol ? lo : hi) = mid;
      }
      return hi;
    }
    const auto it = std::partition_point(tail.begin(), tail.end(), [tol](double t) { return 2.0 * t >= tol; });
    return static_cast<double>(it - tail.begin()) * h;
  }
  const auto env = decay_envelope();
  double lo = 0.0, hi = 1.0;
  while (envelope_tail(env, hi) >= tol) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (envelope_tail(env, mid) >= tol ? lo : hi) = mid;
  }
  return hi;
}

const std::vector<double>& Mollifier::coefficients() const {
  static const std::vector<double> empty;
  return kind_ == MollifierKind::moment_gaussian ? gaussian_->coeffs : empty;
}

double Mollifier::plateau_radius() const { return kind_ == MollifierKind::ft_plateau ? plateau_->a : 0.0; }
double Mollifier::cutoff_radius() const { return kind_ == MollifierKind::ft_plateau ? plateau_->b : 0.0; }
double Mollifier::grid_limit() const {
  return kind_ == MollifierKind::ft_plateau ? (plateau_->points - 1) * plateau_->spec.spacing
                                            : std::numeric_limits<double>::infinity();
}

double eval_scaled(const Mollifier& m, double eps, double x) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eval_scaled: eps must lie in (0, 1)");
  return m(x / eps) / eps;
}

std::vector<MomentCheck> verify_moments(const Mollifier& m, int n_max, double tol) {
  if (n_max < 0) throw InvalidArgument("verify_moments: n_max must be non-negative");
  std::vector<MomentCheck> out;
  for (int n = 0; n <= n_max; ++n) {
    if (n % 2 == 1) {
      out.push_back({n, 0.0, 0.0});
      continue;
    }
    // Truncate where the weighted envelope tail drops below tol / 4.
    const DecayEnvelope weighted{[&m, n](double x) { return std::pow(std::abs(x), n) * m.envelope(x); }};
    double radius = 1.0;
    // Weighted tails that never drop below tol (high n, plateau family) are reported in the error.
    while (envelope_tail(weighted, radius) >= 0.25 * tol && radius < m.grid_limit() && radius < 1e6) radius *= 1.25;
    const double upper = std::min(radius, m.grid_limit());
    std::vector<double> breaks;
    for (double x = 4.0; x < upper; x += 4.0) breaks.push_back(x);
    const auto res = integrate([&m, n](double x) { return 2.0 * std::pow(x, n) * m(x); }, 0.0, upper,
                               QuadOptions{0.5 * tol, 0.0, 20000}, breaks);
    if (!res.acceptable()) {
      std::ostringstream msg;
      msg << "verify_moments: quadrature of moment " << n << " did not converge (estimate " << res.value
          << ", error " << res.error_estimate << ")";
      throw NumericalFailure(msg.str());
    }
    out.push_back({n, res.value, res.error_estimate + envelope_tail(weighted, radius)});
  }
  return out;
}

}  // namespace colombeau
