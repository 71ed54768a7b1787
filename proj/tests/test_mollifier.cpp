#include "colombeau/errors.hpp"
#include "colombeau/mollifier.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace colombeau;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

/// Composite Simpson rule with n (even) panels; independent of the library's quadrature.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Gaussian kernel of moment order q as a truncated Hermite series.
double hermite_kernel(int q, double x) {
  double h0 = 1.0, h1 = 2.0 * x, sum = 1.0, scale = 1.0;
  for (int k = 1; 2 * k <= q; ++k) {
    const int n = 2 * k - 2;
    const double h2 = 2.0 * x * h1 - 2.0 * (n + 1) * h0;
    const double h3 = 2.0 * x * h2 - 2.0 * (n + 2) * h1;
    h0 = h2;
    h1 = h3;
    scale *= -1.0 / (4.0 * k);
    sum += scale * h0;
  }
  return sum * std::exp(-x * x) / kSqrtPi;
}

const Mollifier& plateau() {
  static const Mollifier m = make_ft_plateau_mollifier(1.5, 9.0);
  return m;
}

}  // namespace

TEST_CASE("Gaussian mollifiers agree with the Hermite kernel") {
  for (int q : {0, 2, 4, 6, 8, 12}) {
    const Mollifier m = make_moment_mollifier(q);
    CHECK(m.kind() == MollifierKind::moment_gaussian);
    CHECK(m.order() == q);
    for (double x = -4.0; x <= 4.0; x += 0.37) {
      INFO("q " << q << " x " << x);
      CHECK(testutil::near(m(x), hermite_kernel(q, x), 1e-10, 1e-12));
    }
  }
  CHECK(make_moment_mollifier(0)(0.0) == doctest::Approx(1.0 / kSqrtPi).epsilon(1e-15));
  const Mollifier m2 = make_moment_mollifier(2);
  CHECK(m2(0.8) == doctest::Approx((1.5 - 0.64) * std::exp(-0.64) / kSqrtPi).epsilon(1e-13));
  CHECK(std::abs(m2(10.0)) < 1e-40);
}

TEST_CASE("Gaussian moments by independent quadrature") {
  for (int q : {0, 2, 4, 8}) {
    const Mollifier m = make_moment_mollifier(q);
    for (int n = 0; n <= q + 2; ++n) {
      const double v = simpson([&](double x) { return std::pow(x, n) * m(x); }, -12.0, 12.0, 4000);
      INFO("q " << q << " n " << n);
      if (n == 0) {
        CHECK(std::abs(v - 1.0) < 1e-10);
      } else if (n <= q) {
        CHECK(std::abs(v) < 1e-9);
        CHECK(m.moment(n) == 0.0);
      } else {
        CHECK(testutil::near(v, m.moment(n), 1e-9, 1e-12));
      }
    }
    if (q <= 8) CHECK(std::abs(m.moment(q + 2)) > 1e-6);
  }
  CHECK(make_moment_mollifier(0).moment(2) == doctest::Approx(0.5));
}

TEST_CASE("verify_moments reports the construction") {
  const auto checks = verify_moments(make_moment_mollifier(4), 5);
  REQUIRE(checks.size() == 6);
  CHECK(std::abs(checks[0].value - 1.0) < 1e-9);
  for (int n = 1; n <= 4; ++n) CHECK(std::abs(checks[n].value) < 1e-9);
  CHECK(checks[1].value == 0.0);
  CHECK(checks[3].value == 0.0);
  CHECK(checks[5].value == 0.0);
  const auto q2 = verify_moments(make_moment_mollifier(2), 4);
  CHECK(std::abs(q2[4].value) > 1e-3);
}

TEST_CASE("Gaussian Fourier transform, tail mass and derivatives in closed form") {
  for (int q : {0, 2, 4, 8}) {
    const Mollifier m = make_moment_mollifier(q);
    for (double p : {0.0, 0.5, 1.3, 3.0, 6.0}) {
      const double y = p * p / 4.0;
      double s = 0.0, term = 1.0;
      for (int j = 0; j <= q / 2; ++j) {
        s += term;
        term *= y / (j + 1);
      }
      CHECK(testutil::near(m.fourier_transform(p), std::exp(-y) * s, 1e-12, 1e-14));
    }
  }
  const Mollifier m0 = make_moment_mollifier(0);
  for (double u : {-3.0, -0.5, 0.0, 0.7, 2.5}) {
    CHECK(m0.tail_mass(u) == doctest::Approx(0.5 * std::erfc(u)).epsilon(1e-14));
  }
  const Mollifier m4 = make_moment_mollifier(4);
  for (double x : {-1.7, 0.0, 0.3, 2.2}) {
    const double h = 1e-3;
    const double fd2 = (m4(x + h) - 2.0 * m4(x) + m4(x - h)) / (h * h);
    CHECK(testutil::near(m4.derivative(2, x), fd2, 1e-5, 1e-6));
    const double tail = simpson([&](double t) { return m4(t); }, x, 12.0, 20000);
    CHECK(testutil::near(m4.tail_mass(x), tail, 1e-10, 1e-12));
  }
  // eta' of exp(-x^2)/sqrt(pi) is -2x eta.
  CHECK(m0.derivative(1, 0.6) == doctest::Approx(-1.2 * m0(0.6)).epsilon(1e-14));
}

TEST_CASE("evenness, sign changes and the decay envelope") {
  for (int q : {0, 2, 4, 8}) {
    const Mollifier m = make_moment_mollifier(q);
    double mn = 1.0;
    for (double x = 0.0; x < 8.0; x += 0.05) {
      CHECK(m(x) == m(-x));
      CHECK(m.envelope(x) >= std::abs(m(x)));
      CHECK(m.envelope(x + 0.05) <= m.envelope(x));
      mn = std::min(mn, m(x));
    }
    if (q >= 2) CHECK(mn < 0.0);
    const double R = m.truncation_radius(1e-12);
    CHECK(2.0 * simpson([&](double t) { return m.envelope(t); }, R, R + 20.0, 2000) <= 1.001e-12);
  }
}

TEST_CASE("scaled mollifier") {
  const Mollifier m = make_moment_mollifier(0);
  CHECK(eval_scaled(m, 0.1, 0.0) == doctest::Approx(10.0 / kSqrtPi).epsilon(1e-14));
  CHECK(eval_scaled(m, 0.999, 0.4) == doctest::Approx(m(0.4)).epsilon(2e-3));
  for (double eps : {0.5, 0.1, 0.01}) {
    const double mass = simpson([&](double x) { return eval_scaled(m, eps, x); }, -10.0 * eps, 10.0 * eps, 2000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(eval_scaled(m, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(eval_scaled(m, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(make_moment_mollifier(3), InvalidArgument);
  CHECK_THROWS_AS(make_moment_mollifier(-2), InvalidArgument);
  CHECK_THROWS_AS(make_moment_mollifier(14), InvalidArgument);
  CHECK_THROWS_AS(make_ft_plateau_mollifier(2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_ft_plateau_mollifier(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_moment_mollifier(0).moment(-1), InvalidArgument);
}

TEST_CASE("plateau profile") {
  CHECK(plateau_profile(0.0, 1.5, 9.0) == 1.0);
  CHECK(plateau_profile(1.5, 1.5, 9.0) == 1.0);
  CHECK(plateau_profile(9.0, 1.5, 9.0) == 0.0);
  double prev = 1.0;
  for (double p = 1.5; p <= 9.0; p += 0.25) {
    const double v = plateau_profile(p, 1.5, 9.0);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
}

TEST_CASE("Fourier-plateau mollifier") {
  const Mollifier& m = plateau();
  CHECK(m.kind() == MollifierKind::ft_plateau);
  CHECK(m.order() == kInfiniteOrder);
  CHECK(m.fourier_transform(0.0) == 1.0);
  // Inverse transform oracle: (1/pi) int_0^b profile(p) cos(p x) dp by Simpson.
  for (double x : {0.0, 0.3, 1.7, 4.0, 7.5, 12.0, 30.0}) {
    const double direct =
        simpson([&](double p) { return plateau_profile(p, 1.5, 9.0) * std::cos(p * x); }, 0.0, 9.0, 20000) /
        std::numbers::pi;
    INFO("x " << x);
    CHECK(testutil::near(m(x), direct, 1e-7, 1e-9));
    CHECK(m(x) == doctest::Approx(m(-x)).epsilon(1e-12));
    CHECK(m.envelope(x) >= std::abs(m(x)));
  }
  const auto checks = verify_moments(m, 6, 1e-9);
  CHECK(std::abs(checks[0].value - 1.0) < 1e-8);
  CHECK(std::abs(checks[2].value) < 1e-6);
  CHECK(std::abs(checks[4].value) < 1e-5);
  CHECK(std::abs(checks[6].value) < 1e-5);
  // Derivatives of the transform at 0 vanish, so every verified moment must be small.
  for (int n = 1; n <= 4; ++n) {
    const double h = 0.05;
    double dn = 0.0, binom = 1.0;
    for (int i = 0; i <= n; ++i) {
      dn += (i % 2 ? -1.0 : 1.0) * binom * m.fourier_transform(std::abs((0.5 * n - i) * h));
      binom = binom * (n - i) / (i + 1);
    }
    CHECK(std::abs(dn / std::pow(h, n)) < 1e-12);
    CHECK(std::abs(checks[n].value) < 1e-5);
  }
  CHECK(m.tail_mass(-300.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.tail_mass(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  const double h = 1e-3;
  for (double x : {0.2, 2.0, 9.5}) {
    CHECK(testutil::near(m.derivative(1, x), (m(x + h) - m(x - h)) / (2 * h), 1e-5, 1e-8));
  }
  CHECK(m(m.grid_limit() + 1.0) == 0.0);
  CHECK_THROWS_AS(m.derivative(m.max_derivative_order() + 1, 0.0), InvalidArgument);
}

TEST_CASE("moment-matrix solve in extended precision") {
  const auto c = solve_moment_coefficients<long double>(2);
  REQUIRE(c.size() == 2);
  CHECK(static_cast<double>(c(0)) == doctest::Approx(1.5 / kSqrtPi).epsilon(1e-15));
  CHECK(static_cast<double>(c(1)) == doctest::Approx(-1.0 / kSqrtPi).epsilon(1e-15));
}
