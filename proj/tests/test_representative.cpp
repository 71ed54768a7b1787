#include "colombeau/errors.hpp"
#include "colombeau/representative.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace colombeau;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Dawson's integral exp(-u^2) int_0^u exp(t^2) dt.
double dawson(double u) {
  return simpson([u](double t) { return std::exp(t * t - u * u); }, 0.0, u, 40000);
}

const Mollifier& gauss0() {
  static const Mollifier m = make_moment_mollifier(0);
  return m;
}

}  // namespace

TEST_CASE("embedded delta, Heaviside and abs against Gaussian closed forms") {
  const Mollifier& m = gauss0();
  CHECK(embed_eval(Dist::delta(), m, 0.1, 0.0) == doctest::Approx(10.0 / kSqrtPi).epsilon(1e-14));
  for (double eps : {0.5, 0.1, 0.02}) {
    CHECK(embed_eval(Dist::heaviside(), m, eps, -10.0 * eps) < 1e-8);
    CHECK(embed_eval(Dist::heaviside(), m, eps, 10.0 * eps) > 1.0 - 1e-8);
    for (double x : {-0.3, -0.01, 0.0, 0.04, 0.5}) {
      const double u = x / eps;
      CHECK(embed_eval(Dist::heaviside(), m, eps, x) == doctest::Approx(0.5 * std::erfc(-u)).epsilon(1e-14));
      const double abs_closed = x * std::erf(u) + eps * std::exp(-u * u) / kSqrtPi;
      CHECK(embed_eval(Dist::abs(), m, eps, x) == doctest::Approx(abs_closed).epsilon(1e-9));
      CHECK(testutil::near(embed_eval(Dist::sign(), m, eps, x), std::erf(u), 1e-13, 1e-14));
    }
    CHECK(embed_eval(Dist::abs(), m, eps, 0.0) == doctest::Approx(eps / kSqrtPi).epsilon(1e-9));
  }
}

TEST_CASE("principal value of 1/x against Dawson's integral") {
  const Mollifier& m = gauss0();
  for (double eps : {0.3, 0.05}) {
    for (double x : {-0.2, 0.0, 0.01, 0.1, 0.6}) {
      const double expected = 2.0 * dawson(x / eps) / eps;
      INFO("eps " << eps << " x " << x);
      CHECK(testutil::near(embed_eval(Dist::pv_inverse(), m, eps, x), expected, 1e-8, 1e-10));
    }
  }
}

TEST_CASE("power_plus embedding agrees with direct quadrature of the classical function") {
  const Mollifier& m = gauss0();
  const double eps = 0.1, x = 0.05;
  const double direct = simpson(
      [&](double z) {
        const double y = x + eps * z;
        return y > 0.0 ? std::sqrt(y) * m(z) : 0.0;
      },
      -x / eps, 8.0, 20000);
  CHECK(embed_eval(Dist::power_plus(0.5), m, eps, x) == doctest::Approx(direct).epsilon(1e-7));
  CHECK_THROWS_AS(Dist::power_plus(1.0), InvalidArgument);
  CHECK_THROWS_AS(Dist::power_plus(0.0), InvalidArgument);
}

TEST_CASE("products and sums evaluate pointwise") {
  const Mollifier& m = gauss0();
  const Expr d = embed(Dist::delta());
  const Representative sq(product({d, d}), m);
  CHECK(sq(0.1, 0.0) == doctest::Approx(100.0 / std::numbers::pi).epsilon(1e-14));
  const Expr g = embed(Dist::abs()) * embed(Dist::heaviside());
  const Representative cancel(g - g, m);
  for (double x : {-0.5, 0.0, 0.2}) CHECK(cancel(0.1, x) == 0.0);
  const Representative unit(product({one(), g}), m), plain(g, m);
  for (double x : {-0.5, 0.0, 0.2}) CHECK(unit(0.1, x) == plain(0.1, x));
  const Expr a = embed(Dist::delta()), b = embed(Dist::sign()), c = smooth(Smooth::sin());
  const Representative ab(product({a, b}), m), ba(product({b, a}), m);
  const Representative left(product({product({a, b}), c}), m), right(product({a, product({b, c})}), m);
  for (double x : {-0.3, 0.01, 0.4}) {
    CHECK(ab(0.2, x) == ba(0.2, x));
    const double l = left(0.2, x), r = right(0.2, x);
    CHECK(std::abs(l - r) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(l));
  }
}

TEST_CASE("embedding is linear") {
  const Mollifier m = make_moment_mollifier(2);
  const std::vector<Dist> zoo{Dist::delta(), Dist::heaviside(), Dist::abs(), Dist::sign(), Dist::power_plus(0.5),
                              Dist::polynomial({1.0, 0.0, -2.0})};
  for (std::size_t i = 0; i < zoo.size(); ++i) {
    for (std::size_t j = i + 1; j < zoo.size(); ++j) {
      const Representative lin(sum({scale(1.5, embed(zoo[i])), scale(-0.25, embed(zoo[j]))}), m);
      for (double x : {-0.4, 0.03, 0.7}) {
        const double expected = 1.5 * embed_eval(zoo[i], m, 0.1, x) - 0.25 * embed_eval(zoo[j], m, 0.1, x);
        CHECK(testutil::near(lin(0.1, x), expected, 1e-12, 1e-12));
      }
    }
  }
}

TEST_CASE("derivatives commute with embedding") {
  for (int q : {0, 4}) {
    const Mollifier m = make_moment_mollifier(q);
    for (double eps : {0.1, 0.025}) {
      for (double x : {-0.2, -0.01, 0.0, 0.013, 0.3}) {
        const double delta = embed_eval(Dist::delta(), m, eps, x);
        CHECK(testutil::near(Representative(derivative(1, embed(Dist::heaviside())), m)(eps, x), delta, 1e-13, 1e-12));
        CHECK(testutil::near(Representative(derivative(1, embed(Dist::abs())), m)(eps, x), embed_eval(Dist::sign(), m, eps, x), 1e-13, 1e-13));
        const double d2abs = embed_derivative_eval(Dist::abs(), m, 2, eps, x, DerivativeRoute::convolution);
        CHECK(std::abs(d2abs - 2.0 * delta) < 1e-6);
        const double d1h = embed_derivative_eval(Dist::heaviside(), m, 1, eps, x, DerivativeRoute::convolution);
        CHECK(testutil::near(d1h, delta, 1e-8, 1e-9));
        const double pp_a = embed_derivative_eval(Dist::power_plus(0.5), m, 1, eps, x);
        const double h = 1e-4 * eps;
        const double pp_fd = (embed_eval(Dist::power_plus(0.5), m, eps, x + h, {1e-12, 1e-3}) -
                              embed_eval(Dist::power_plus(0.5), m, eps, x - h, {1e-12, 1e-3})) /
                             (2.0 * h);
        CHECK(pp_a == doctest::Approx(pp_fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("Leibniz rule on random products") {
  const Mollifier m = make_moment_mollifier(2);
  const std::vector<Expr> zoo{embed(Dist::delta()), embed(Dist::heaviside()), embed(Dist::abs()),
                              smooth(Smooth::sin()), smooth(Smooth::poly({0.5, -1.0, 2.0})), embed(Dist::sign())};
  std::mt19937 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, zoo.size() - 1);
  std::uniform_real_distribution<double> xs(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const Expr g = zoo[pick(rng)], h = zoo[pick(rng)];
    const double eps = 0.2, x = xs(rng);
    const Representative gh(product({g, h}), m), rg(g, m), rh(h, m);
    const double leibniz = rg.derivative(1, eps, x) * rh(eps, x) + rg(eps, x) * rh.derivative(1, eps, x);
    const double step = 1e-5;
    const double fd = (gh(eps, x + step) - gh(eps, x - step)) / (2.0 * step);
    INFO(to_string(g) << " * " << to_string(h) << " at " << x);
    CHECK(testutil::near(gh.derivative(1, eps, x), leibniz, 1e-10, 1e-10));
    CHECK(testutil::near(fd, leibniz, 1e-5, 1e-5));
  }
}

TEST_CASE("finite differences take over beyond the analytic derivative order") {
  const Mollifier m = make_moment_mollifier(0);
  const Expr d = embed(Dist::delta());
  const int cap = analytic_derivative_order(d, m);
  CHECK(cap == m.max_derivative_order());
  CHECK(analytic_derivative_order(embed(Dist::abs()), m) == cap + 2);
  CHECK(analytic_derivative_order(derivative(2, embed(Dist::abs())), m) == cap);
  const Representative r(derivative(cap, d), m);
  const Representative direct(d, m);
  const double eps = 0.5, x = 0.3;
  const double fd_next = r.derivative(1, eps, x);
  const double h = 1e-3;
  const double fd_check = (direct.derivative(cap, eps, x + h) - direct.derivative(cap, eps, x - h)) / (2.0 * h);
  CHECK(fd_next == doctest::Approx(fd_check).epsilon(1e-4));
  const Representative tiny(d, m, {}, EvalOptions{1e-8, 1e-300});
  CHECK_THROWS_AS(tiny.derivative(cap + 1, 0.5, 0.3), NumericalFailure);
}

TEST_CASE("smooth embedding residual") {
  for (int q : {0, 2, 4}) {
    const Mollifier m = make_moment_mollifier(q);
    std::vector<double> coeffs(q + 1, 0.0);
    for (int i = 0; i <= q; ++i) coeffs[i] = 1.0 / (i + 1);
    for (double x : {-0.7, 0.0, 0.4}) {
      CHECK(std::abs(smooth_embedding_residual(Smooth::poly(coeffs), m, 0.3, x)) < 1e-14);
    }
    CHECK(std::abs(smooth_embedding_residual(Smooth::sin(), m, 0.3, 0.0)) < 1e-15);
  }
  // sin: (sin)_eps(x) - sin(x) = sin(x) (eta-hat(eps) - 1); for q = 2 eta-hat(p) = e^{-p^2/4}(1 + p^2/4).
  const Mollifier m2 = make_moment_mollifier(2);
  for (double eps : {0.5, 0.1, 0.01}) {
    const double y = eps * eps / 4.0;
    const double expected = std::sin(0.8) * (std::exp(-y) * (1.0 + y) - 1.0);
    CHECK(smooth_embedding_residual(Smooth::sin(), m2, eps, 0.8) == doctest::Approx(expected).epsilon(1e-9));
  }
  const double r1 = smooth_embedding_residual(Smooth::sin(), m2, 0.02, 0.8);
  const double r2 = smooth_embedding_residual(Smooth::sin(), m2, 0.01, 0.8);
  CHECK(std::log(r1 / r2) / std::log(2.0) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("embedded test function and smooth function by convolution") {
  const Mollifier& m = gauss0();
  const Bump b{0.2, 0.5, 2.0};
  const double eps = 0.05, x = 0.3;
  const double direct = simpson([&](double z) { return m(z) * b(x + eps * z); }, -8.0, 8.0, 8000);
  CHECK(embed_eval(Dist::smooth_test(b), m, eps, x) == doctest::Approx(direct).epsilon(1e-9));
  // (exp)_eps(x) = exp(x) eta-hat(i eps) = exp(x + eps^2 / 4) for the Gaussian.
  CHECK(embed_eval(Dist::smooth(Smooth::exp()), m, 0.2, 0.5) == doctest::Approx(std::exp(0.5 + 0.01)).epsilon(1e-8));
  CHECK(embed_eval(Dist::polynomial({0.0, 0.0, 1.0}), m, 0.2, 0.5) == doctest::Approx(0.25 + 0.02).epsilon(1e-14));
}

TEST_CASE("preconditions") {
  const Mollifier& m = gauss0();
  const Representative r(embed(Dist::delta()), m, Interval{-1.0, 1.0});
  CHECK_THROWS_AS(r(0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(r(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(r(0.5, 2.0), InvalidArgument);
  CHECK_THROWS_AS(Representative(one(), m, Interval{1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(derivative(0, one()), InvalidArgument);
  CHECK_THROWS_AS(sum({}), InvalidArgument);
  CHECK_THROWS_AS(scale(NAN, one()), InvalidArgument);
  CHECK_THROWS_AS(Dist::smooth_test(Bump{0.0, 0.0, 1.0}), InvalidArgument);
}

TEST_CASE("structural equality and rendering") {
  const Expr a = derivative(2, embed(Dist::abs()));
  const Expr b = derivative(2, embed(Dist::abs()));
  CHECK(a == b);
  CHECK_FALSE(a == derivative(1, embed(Dist::abs())));
  CHECK(to_string(a) == "D^2(abs)");
  CHECK(to_string(embed(Dist::delta()) * embed(Dist::heaviside())) == "(delta * heaviside)");
  CHECK(to_string(compose(Smooth::exp(), -embed(Dist::delta()))) == "exp(-1*delta)");
  CHECK(Smooth::poly({1.0, 2.0, 0.0}) == Smooth::poly({1.0, 2.0}));
  CHECK(Smooth::poly({0.0}).degree() == -1);
}
