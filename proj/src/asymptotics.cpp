#include "colombeau/asymptotics.hpp"

#include "colombeau/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace colombeau {

EpsLadder::EpsLadder(std::vector<double> eps) : eps_(std::move(eps)) {
  if (eps_.size() < 4) throw InvalidArgument("EpsLadder: at least four rungs required");
  for (std::size_t i = 0; i < eps_.size(); ++i) {
    if (!(eps_[i] > 0.0 && eps_[i] < 1.0)) throw InvalidArgument("EpsLadder: values must lie in (0, 1)");
    if (i > 0 && !(eps_[i] < eps_[i - 1])) throw InvalidArgument("EpsLadder: values must strictly decrease");
  }
}

EpsLadder EpsLadder::geometric(double start, double ratio, int rungs) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("EpsLadder: ratio must lie in (0, 1)");
  std::vector<double> eps;
  for (int k = 0; k < rungs; ++k) eps.push_back(start * std::pow(ratio, k));
  return EpsLadder(std::move(eps));
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::moderate: return "moderate";
    case Classification::negligible: return "negligible";
    case Classification::non_moderate: return "non_moderate";
    case Classification::indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

double golden_max(const std::function<double(double)>& f, double a, double b, int iterations, double& arg) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  arg = fc > fd ? c : d;
  return std::max(fc, fd);
}

struct LineFit {
  double slope, intercept, rms;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = x[i];
    A(i, 1) = 1.0;
    b(i) = y[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  const double rms = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(n));
  return {c(0), c(1), rms};
}

}  // namespace

double sup_norm(const Representative& rep, double eps, const Interval& K, int alpha, std::optional<int> weight_m,
                const SupNormOptions& options) {
  if (!(K.lo <= K.hi)) throw InvalidArgument("sup_norm: empty compact");
  if (!rep.domain().contains(K)) throw InvalidArgument("sup_norm: compact not contained in the domain");
  if (alpha < 0) throw InvalidArgument("sup_norm: alpha must be non-negative");
  if (weight_m && *weight_m < 0) throw InvalidArgument("sup_norm: weight exponent must be non-negative");

  auto value = [&](double x) {
    const double w = weight_m ? std::pow(1.0 + std::abs(x), -*weight_m) : 1.0;
    const double v = std::abs(w * rep.derivative(alpha, eps, x));
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<double> xs;
  if (K.lo == K.hi) {
    xs.push_back(K.lo);
  } else {
    const int n = std::max(2, options.samples);
    for (int i = 0; i < n; ++i) xs.push_back(K.lo + K.length() * i / (n - 1));
    for (double s : options.singular_points) {
      if (!K.contains(s)) continue;
      const int m = std::max(2, options.singular_samples);
      for (int i = 0; i < m; ++i) {
        const double x = s + eps * options.singular_halfwidth * (2.0 * i / (m - 1) - 1.0);
        if (K.contains(x)) xs.push_back(x);
      }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  }

  std::vector<double> vs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    vs[i] = value(xs[i]);
    if (!std::isfinite(vs[i])) return std::numeric_limits<double>::infinity();
  }
  double best = *std::max_element(vs.begin(), vs.end());
  if (xs.size() < 3) return best;

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  const auto top = std::min<std::size_t>(options.refine_top, order.size());
  std::partial_sort(order.begin(), order.begin() + top, order.end(),
                    [&vs](std::size_t a, std::size_t b) { return vs[a] > vs[b]; });
  for (std::size_t t = 0; t < top; ++t) {
    const std::size_t i = order[t];
    const double a = xs[i == 0 ? 0 : i - 1], b = xs[std::min(i + 1, xs.size() - 1)];
    double arg;
    const double v = golden_max(value, a, b, options.refine_iterations, arg);
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    best = std::max(best, v);
  }
  return best;
}

ExponentFit classify_sups(const std::vector<double>& eps, const std::vector<double>& sups, int q_eff,
                          const FitOptions& options) {
  ExponentFit fit;
  fit.eps = eps;
  fit.sup_values = sups;
  const std::size_t n = sups.size();
  if (n != eps.size() || n < 4) throw InvalidArgument("classify_sups: need matching eps and sup lists of length >= 4");

  const double inf = std::numeric_limits<double>::infinity();
  if (std::all_of(sups.begin(), sups.end(), [](double s) { return s == 0.0; })) {
    fit.slope = inf;
    fit.classification = Classification::negligible;
    fit.note = "identically zero";
    return fit;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(sups[k])) {
      fit.slope = -inf;
      fit.classification = Classification::non_moderate;
      std::ostringstream msg;
      msg << "overflow at eps = " << eps[k];
      fit.note = msg.str();
      return fit;
    }
  }

  // Positive prefix followed by exact zeros: decay beyond the floating-point range.
  std::size_t positive = 0;
  while (positive < n && sups[positive] > 0.0) ++positive;
  const bool trailing_zeros =
      positive < n && std::all_of(sups.begin() + positive, sups.end(), [](double s) { return s == 0.0; });
  if (positive < n && !trailing_zeros) {
    fit.classification = Classification::indeterminate;
    fit.note = "zero sup interleaved with positive values";
    return fit;
  }

  std::vector<double> X, Y;
  for (std::size_t k = 0; k < positive; ++k) {
    X.push_back(std::log(eps[k]));
    Y.push_back(std::log(sups[k]));
  }
  if (trailing_zeros) {
    fit.classification = Classification::negligible;
    fit.note = "underflow to zero";
    if (X.size() >= 2) {
      const auto lf = least_squares(X, Y);
      fit.slope = lf.slope;
      fit.intercept_log = lf.intercept;
      fit.fit_residual = lf.rms;
    } else {
      fit.slope = inf;
    }
    return fit;
  }

  std::vector<double> local;
  for (std::size_t k = 0; k + 1 < X.size(); ++k) local.push_back((Y[k + 1] - Y[k]) / (X[k + 1] - X[k]));
  const std::size_t L = local.size();
  if (L >= 3) {
    const double last = local[L - 1];
    const bool accelerating_growth = local[L - 1] < local[L - 2] && local[L - 2] < local[L - 3];
    const bool accelerating_decay = local[L - 1] > local[L - 2] && local[L - 2] > local[L - 3];
    if (last < -options.slope_max && accelerating_growth) {
      const auto lf = least_squares(X, Y);
      fit.slope = last;
      fit.intercept_log = lf.intercept;
      fit.fit_residual = lf.rms;
      fit.classification = Classification::non_moderate;
      fit.note = "super-polynomial growth: convex log-log profile beyond the slope cap";
      return fit;
    }
    if (last > options.slope_max && accelerating_decay) {
      const auto lf = least_squares(X, Y);
      fit.slope = last;
      fit.intercept_log = lf.intercept;
      fit.fit_residual = lf.rms;
      fit.classification = Classification::negligible;
      fit.note = "super-polynomial decay: concave log-log profile beyond the slope cap";
      return fit;
    }
  }

  const double threshold = std::min(options.q_threshold, static_cast<double>(q_eff) + 1.0);
  auto decide = [&](const LineFit& lf) {
    fit.slope = lf.slope;
    fit.intercept_log = lf.intercept;
    fit.fit_residual = lf.rms;
    if (lf.slope > threshold) {
      fit.classification = Classification::negligible;
    } else {
      fit.classification = Classification::moderate;
      fit.N = std::max(0, static_cast<int>(std::ceil(-lf.slope - 0.1)));
    }
  };

  const auto full = least_squares(X, Y);
  if (full.rms <= options.residual_max) {
    decide(full);
    return fit;
  }
  const std::size_t half = std::max<std::size_t>(4, X.size() / 2);
  const std::vector<double> Xt(X.end() - half, X.end()), Yt(Y.end() - half, Y.end());
  const auto tail = least_squares(Xt, Yt);
  if (tail.rms <= options.residual_max) {
    decide(tail);
    fit.note = "fit restricted to the last " + std::to_string(half) + " rungs";
    return fit;
  }
  fit.slope = full.slope;
  fit.intercept_log = full.intercept;
  fit.fit_residual = full.rms;
  fit.classification = Classification::indeterminate;
  fit.note = "no power law fits the sup sequence";
  return fit;
}

ExponentFit fit_exponent(const Representative& rep, const EpsLadder& ladder, const Interval& K, int alpha,
                         std::optional<int> weight_m, const FitOptions& fit_options, const SupNormOptions& sup) {
  std::vector<double> sups;
  for (double eps : ladder.values()) sups.push_back(sup_norm(rep, eps, K, alpha, weight_m, sup));
  auto fit = classify_sups(ladder.values(), sups, rep.mollifier().effective_order(), fit_options);
  fit.compact = K;
  fit.alpha = alpha;
  fit.weight_m = weight_m;
  return fit;
}

AsymptoticReport aggregate(std::vector<ExponentFit> fits, std::optional<int> weight_m) {
  if (fits.empty()) throw InvalidArgument("aggregate: no fits");
  AsymptoticReport report;
  report.tempered_weight_m = weight_m;

  auto any = [&](Classification c) {
    return std::any_of(fits.begin(), fits.end(), [c](const ExponentFit& f) { return f.classification == c; });
  };
  auto first_with = [&](Classification c) {
    const ExponentFit* best = nullptr;
    for (const auto& f : fits) {
      if (f.classification == c && (!best || f.alpha < best->alpha)) best = &f;
    }
    return best;
  };

  const ExponentFit* primary = nullptr;
  if (any(Classification::non_moderate)) {
    report.classification = Classification::non_moderate;
    primary = first_with(Classification::non_moderate);
  } else if (any(Classification::indeterminate)) {
    report.classification = Classification::indeterminate;
    primary = first_with(Classification::indeterminate);
  } else if (std::all_of(fits.begin(), fits.end(),
                         [](const ExponentFit& f) { return f.classification == Classification::negligible; })) {
    report.classification = Classification::negligible;
    for (const auto& f : fits) {
      if (f.alpha == 0 && (!primary || f.slope < primary->slope)) primary = &f;
    }
    if (!primary) primary = &fits.front();
  } else {
    report.classification = Classification::moderate;
    // N is reported for the lowest derivative order that is moderate, on its worst compact.
    for (const auto& f : fits) {
      if (f.classification != Classification::moderate) continue;
      if (!primary || f.alpha < primary->alpha || (f.alpha == primary->alpha && f.N > primary->N)) primary = &f;
    }
  }

  report.slope = primary->slope;
  report.intercept_log = primary->intercept_log;
  report.fit_residual = primary->fit_residual;
  report.eps = primary->eps;
  report.sup_values = primary->sup_values;
  report.derivative_order = primary->alpha;
  report.compact = primary->compact;
  report.N = report.classification == Classification::moderate ? primary->N : 0;
  report.fits = std::move(fits);
  return report;
}

AsymptoticReport classify(const Expr& expr, const Mollifier& m, const ClassifyConfig& config) {
  if (config.alpha_max < 0) throw InvalidArgument("classify: alpha_max must be non-negative");
  if (config.compacts.empty()) throw InvalidArgument("classify: at least one compact required");
  const Representative rep(expr, m, config.domain, config.eval);
  std::vector<ExponentFit> fits;
  for (const auto& K : config.compacts) {
    for (int alpha = 0; alpha <= config.alpha_max; ++alpha) {
      fits.push_back(fit_exponent(rep, config.ladder, K, alpha, config.weight_m, config.fit, config.sup));
    }
  }
  return aggregate(std::move(fits), config.weight_m);
}

}  // namespace colombeau
