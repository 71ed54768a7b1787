#pragma once

#include "colombeau/asymptotics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace colombeau {

/// Test function: the standard bump supported on [center - radius, center + radius].
using TestFunction = Bump;

/// Seven bumps of varied centers and radii covering the default domain [-10, 10].
std::vector<TestFunction> default_probes();

enum class PairingStatus { converged, divergent, indeterminate };

std::string to_string(PairingStatus s);

struct PairOptions {
  /// Tolerances of the x-quadrature of g_eps T.
  double quad_rel_tol = 1e-11;
  double quad_abs_tol = 1e-14;
  /// Points where g_eps has eps-scale structure; breakpoints go at s and s +- eps {1, 4, 16}.
  std::vector<double> singular_points{0.0};
  /// Successive rung differences below this (times max(1, |value|)) count as converged.
  double cauchy_tol = 1e-10;
  /// Admissible range of the fitted correction power.
  double p_min = 0.3;
  double p_max = 20.0;
  /// Two consecutive windows must agree on p within this (times max(1, p)).
  double p_stability = 0.25;
  /// Log-log slope of |values| at or below -divergence_slope marks divergence.
  double divergence_slope = 0.25;
};

/// Pairings of g_eps with a test function along a ladder and their eps -> 0 behaviour.
struct PairingResult {
  std::vector<double> eps;
  std::vector<double> values;
  /// Quadrature error estimate per rung.
  std::vector<double> errors;
  PairingStatus status = PairingStatus::indeterminate;
  std::optional<double> limit;
  double limit_error = 0.0;
  /// Fitted power p of the leading correction C eps^p.
  std::optional<double> correction_power;
  /// Fitted a and C when the values grow like C eps^-a.
  std::optional<double> divergence_exponent;
  std::optional<double> divergence_constant;
  std::string note;
};

/// int g_eps(x) T(x) dx for one eps.
QuadResult pair_value(const Representative& rep, const TestFunction& T, double eps, const PairOptions& options = {});

/**
 Decide the eps -> 0 behaviour of a sequence of pairings.

 In order: a Cauchy tail gives the last value as limit; four growing rungs with
 log-log slope below -divergence_slope give divergence; otherwise single-power
 Richardson extrapolation over three-rung windows, accepted only when two
 consecutive windows agree on the power. Everything else is indeterminate.
 */
PairingResult extrapolate(std::vector<double> eps, std::vector<double> values, std::vector<double> errors,
                          const PairOptions& options = {});

PairingResult pair(const Representative& rep, const TestFunction& T, const EpsLadder& ladder,
                   const PairOptions& options = {});

enum class Association { associated, not_associated, indeterminate };

std::string to_string(Association a);

struct AssociationResult {
  Association verdict = Association::indeterminate;
  double tol = 0.0;
  std::vector<TestFunction> probes;
  std::vector<PairingResult> pairings;
};

struct AssociationOptions {
  double tol = 1e-6;
  EpsLadder ladder = EpsLadder::geometric();
  std::vector<TestFunction> probes = default_probes();
  PairOptions pair{};
};

/// g and h associated iff every probe pairs g - h to a limit of magnitude at most tol.
AssociationResult associated(const Representative& g, const Representative& h, const AssociationOptions& options = {});

/// Pairings of g against each probe.
std::vector<PairingResult> shadow_report(const Representative& g, const std::vector<TestFunction>& probes,
                                         const EpsLadder& ladder = EpsLadder::geometric(),
                                         const PairOptions& options = {});

/// The distribution's action on T: T(0) for delta, PV for pv_inverse, int f T otherwise.
double classical_pairing(const Dist& d, const TestFunction& T, double tol = 1e-12);

struct IdentityReport {
  std::vector<double> eps;
  std::vector<double> values;
  double mean = 0.0;
  double stddev = 0.0;
  double max_deviation = 0.0;  ///< from the expected value
};

/// int (H_eps^2 - H_eps) H_eps' dx at one eps, computed in x.
double h2h_integral(const Mollifier& m, double eps);

/// The same integral along a ladder; expected value -1/6.
IdentityReport exact_identity_check_H2H(const Mollifier& m, const EpsLadder& ladder = EpsLadder::geometric());

/// (charge^2 / 2) int delta_eps(x)^2 dx, computed in x.
double self_energy(const Mollifier& m, double eps, double charge = 1.0);

struct SelfEnergyReport {
  std::vector<double> eps;
  std::vector<double> energy;
  std::vector<double> scaled;  ///< eps * U(eps)
  double max_spread = 0.0;     ///< max |scaled - scaled[0]|
};

SelfEnergyReport self_energy_scan(const Mollifier& m, const EpsLadder& ladder = EpsLadder::geometric(),
                                  double charge = 1.0);

struct ImpossibilityReport {
  /// x * pv(1/x) - 1 and x * delta against T.
  PairingResult x_pv_minus_one;
  PairingResult x_delta;
  PairingResult triple;
  /// Triple-product limit divided by T(0).
  std::optional<double> triple_constant;
  /// Largest relative gap between (x pv) delta and x (pv delta) over the sample points.
  double parenthesization_gap = 0.0;
  int samples = 0;
  bool x_pv_associates_one = false;
  bool x_delta_associates_zero = false;
};

ImpossibilityReport impossibility_demo(const Mollifier& m, const TestFunction& T,
                                       const EpsLadder& ladder = EpsLadder::geometric(),
                                       const AssociationOptions& options = {});

}  // namespace colombeau
