#pragma once

#include "colombeau/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <vector>

namespace colombeau {

enum class MollifierKind { moment_gaussian, ft_plateau };

/// Sentinel moment order of Fourier-plateau mollifiers (all moments vanish).
inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

/// Order the classifier assumes for Fourier-plateau mollifiers: the highest order verified numerically.
inline constexpr int kPlateauEffectiveOrder = 12;

inline constexpr int kDefaultMaxMomentOrder = 12;

/// Sampling grid of a Fourier-plateau mollifier.
struct PlateauGridSpec {
  double x_max = 200.0;
  double spacing = 0.01;
  /// Below this |x| the inverse Fourier integral is summed directly; above it the
  /// integrand is integrated by parts `ibp_order` times over the transition band.
  double direct_limit = 8.0;
  int ibp_order = 6;
  /// Grids of eta^(j) for j <= derivative_grids; interpolating order j needs j + 2.
  int derivative_grids = 6;
};

namespace detail {
struct GaussianData;
struct PlateauData;
}  // namespace detail

/**
 An even Colombeau mollifier eta with unit mass and vanishing moments up to its order.

 Two families are supported: P(x^2) exp(-x^2) with P chosen so that the moments
 1..q vanish, and the inverse Fourier transform of a smooth plateau function equal
 to 1 near p = 0 (all moments vanish). Instances are immutable and cheap to copy.
 */
class Mollifier {
 public:
  MollifierKind kind() const { return kind_; }

  /// Moment order q; kInfiniteOrder for Fourier-plateau mollifiers.
  int order() const { return order_; }
  /// q for the moment family, kPlateauEffectiveOrder for the plateau family.
  int effective_order() const { return order_ == kInfiniteOrder ? kPlateauEffectiveOrder : order_; }

  double operator()(double x) const { return derivative(0, x); }
  /// eta^(n)(x) for 0 <= n <= max_derivative_order().
  double derivative(int n, double x) const;
  int max_derivative_order() const;

  /// Integral of eta over [u, +inf).
  double tail_mass(double u) const;
  /// Analytic moment of the ideal mollifier: integral of x^n eta.
  double moment(int n) const;
  /// eta-hat(p) = integral of eta(x) exp(-i p x) dx (real since eta is even).
  double fourier_transform(double p) const;

  /// Certified upper bound on |eta(x)|; even and non-increasing in |x|.
  double envelope(double x) const;
  DecayEnvelope decay_envelope() const;
  /// Smallest radius R with the two-sided envelope tail beyond R below tol.
  double truncation_radius(double tol) const;

  /// Polynomial coefficients c_j of P(t) (eta = P(x^2) exp(-x^2)); empty for the plateau family.
  const std::vector<double>& coefficients() const;
  double plateau_radius() const;
  double cutoff_radius() const;
  /// Largest |x| sampled by the plateau grid; +inf for the moment family.
  double grid_limit() const;

 private:
  friend Mollifier make_moment_mollifier(int q, int q_max);
  friend Mollifier make_ft_plateau_mollifier(double plateau_radius, double cutoff_radius,
                                             const PlateauGridSpec& grid);

  MollifierKind kind_ = MollifierKind::moment_gaussian;
  int order_ = 0;
  std::shared_ptr<const detail::GaussianData> gaussian_;
  std::shared_ptr<const detail::PlateauData> plateau_;
};

/// eta = P(x^2) exp(-x^2) with the moments 1..q vanishing; q must be even and at most q_max.
Mollifier make_moment_mollifier(int q, int q_max = kDefaultMaxMomentOrder);

/// eta = (1/pi) int_0^inf eta-hat(p) cos(p x) dp with eta-hat = 1 on [0, plateau] and 0 beyond cutoff.
Mollifier make_ft_plateau_mollifier(double plateau_radius, double cutoff_radius,
                                    const PlateauGridSpec& grid = {});

/// The smooth plateau profile itself: 1 on [0, plateau], 0 beyond cutoff, exp(-1/t)-based in between.
double plateau_profile(double p, double plateau_radius, double cutoff_radius);

inline double eval(const Mollifier& m, double x) { return m(x); }

/// eta_eps(x) = eta(x / eps) / eps for eps in (0, 1).
double eval_scaled(const Mollifier& m, double eps, double x);

struct MomentCheck {
  int n;
  double value;
  double error_estimate;
};

/// Quadrature estimates of int x^n eta dx for 0 <= n <= n_max.
std::vector<MomentCheck> verify_moments(const Mollifier& m, int n_max, double tol = 1e-11);

/**
 Solve the moment system for the coefficients of P(t) with eta = P(x^2) exp(-x^2).

 Row k enforces int x^(2k) eta dx = [k == 0]; entries are Gamma(j + k + 1/2).
 Templated on the scalar so the Hankel system can be solved in extended precision.
 */
template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_moment_coefficients(int q) {
  const int n = q / 2 + 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) gram(k, j) = std::tgamma(Scalar(j + k) + Scalar(0.5));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  rhs(0) = Scalar(1);
  Eigen::FullPivLU<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> lu(gram);
  if (!lu.isInvertible()) return {};
  return lu.solve(rhs);
}

}  // namespace colombeau
