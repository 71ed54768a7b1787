#pragma once

#include "colombeau/representative.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace colombeau {

/// Strictly decreasing eps values in (0, 1), at least four rungs.
class EpsLadder {
 public:
  explicit EpsLadder(std::vector<double> eps);
  /// eps_k = start * ratio^k for k = 0..rungs-1.
  static EpsLadder geometric(double start = 0.5, double ratio = 0.5, int rungs = 11);

  const std::vector<double>& values() const { return eps_; }
  std::size_t size() const { return eps_.size(); }
  double operator[](std::size_t i) const { return eps_[i]; }

 private:
  std::vector<double> eps_;
};

enum class Classification { moderate, negligible, non_moderate, indeterminate };

std::string to_string(Classification c);

struct SupNormOptions {
  int samples = 2048;
  /// Extra samples at s + eps * t, t uniform in [-singular_halfwidth, singular_halfwidth].
  int singular_samples = 257;
  double singular_halfwidth = 12.0;
  std::vector<double> singular_points{0.0};
  /// Local maximization around the largest samples.
  int refine_top = 5;
  int refine_iterations = 40;
};

struct FitOptions {
  /// Slopes above min(q_threshold, effective mollifier order + 1) count as negligible.
  double q_threshold = 6.0;
  double residual_max = 0.25;
  double slope_max = 20.0;
};

/// Least-squares exponent of sup |D^alpha g_eps| over K along a ladder.
struct ExponentFit {
  Interval compact;
  int alpha = 0;
  std::optional<int> weight_m;
  std::vector<double> eps;
  std::vector<double> sup_values;
  double slope = 0.0;
  double intercept_log = 0.0;
  double fit_residual = 0.0;
  Classification classification = Classification::indeterminate;
  /// Smallest N >= 0 with slope >= -N (up to 0.1); meaningful for moderate fits.
  int N = 0;
  std::string note;
};

struct ClassifyConfig {
  EpsLadder ladder = EpsLadder::geometric();
  std::vector<Interval> compacts{{-1.0, 1.0}};
  int alpha_max = 2;
  std::optional<int> weight_m;
  Interval domain{};
  EvalOptions eval{};
  FitOptions fit{};
  SupNormOptions sup{};
};

struct AsymptoticReport {
  double slope = 0.0;
  double intercept_log = 0.0;
  double fit_residual = 0.0;
  std::vector<double> eps;
  std::vector<double> sup_values;
  int derivative_order = 0;
  Interval compact;
  Classification classification = Classification::indeterminate;
  int N = 0;
  std::optional<int> tempered_weight_m;
  /// One fit per (compact, alpha).
  std::vector<ExponentFit> fits;
};

/// max over K of (1 + |x|)^-m |D^alpha g_eps(x)|; +inf if any sample overflows.
double sup_norm(const Representative& rep, double eps, const Interval& K, int alpha,
                std::optional<int> weight_m = std::nullopt, const SupNormOptions& options = {});

/// Classify a sequence of sups along the ladder; `q_eff` is the effective mollifier order.
ExponentFit classify_sups(const std::vector<double>& eps, const std::vector<double>& sups, int q_eff,
                          const FitOptions& options = {});

ExponentFit fit_exponent(const Representative& rep, const EpsLadder& ladder, const Interval& K, int alpha,
                         std::optional<int> weight_m = std::nullopt, const FitOptions& fit = {},
                         const SupNormOptions& sup = {});

/// Fits for every alpha in 0..alpha_max on every compact, aggregated with the worst case governing.
AsymptoticReport classify(const Expr& expr, const Mollifier& m, const ClassifyConfig& config = {});

/// Aggregate already computed fits.
AsymptoticReport aggregate(std::vector<ExponentFit> fits, std::optional<int> weight_m);

}  // namespace colombeau
