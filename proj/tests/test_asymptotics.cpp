#include "colombeau/asymptotics.hpp"
#include "colombeau/errors.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

using namespace colombeau;

namespace {

std::vector<double> ladder_values() { return EpsLadder::geometric().values(); }

std::vector<double> power_sups(double C, double slope) {
  std::vector<double> s;
  for (double e : ladder_values()) s.push_back(C * std::pow(e, slope));
  return s;
}

const Mollifier& gauss0() {
  static const Mollifier m = make_moment_mollifier(0);
  return m;
}

ClassifyConfig light_config(int alpha_max) {
  ClassifyConfig c;
  c.ladder = EpsLadder::geometric(0.5, 0.5, 8);
  c.alpha_max = alpha_max;
  c.eval.quad_tol = 1e-8;
  return c;
}

}  // namespace

TEST_CASE("eps ladders") {
  const auto g = EpsLadder::geometric(0.5, 0.5, 6);
  CHECK(g.size() == 6);
  CHECK(g[5] == doctest::Approx(0.5 / 32));
  CHECK_THROWS_AS(EpsLadder({0.5, 0.4, 0.3}), InvalidArgument);
  CHECK_THROWS_AS(EpsLadder({0.5, 0.4, 0.4, 0.3}), InvalidArgument);
  CHECK_THROWS_AS(EpsLadder({1.0, 0.5, 0.25, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(EpsLadder({0.5, 0.25, 0.1, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(EpsLadder::geometric(0.5, 1.0, 6), InvalidArgument);
}

TEST_CASE("classification of synthetic sup sequences") {
  const auto eps = ladder_values();
  SUBCASE("power growth is moderate with the matching N") {
    for (int n : {0, 1, 2, 3, 5}) {
      const auto f = classify_sups(eps, power_sups(3.0, -n), 4);
      CHECK(f.classification == Classification::moderate);
      CHECK(f.N == n);
      CHECK(f.slope == doctest::Approx(-n).epsilon(1e-12));
      CHECK(std::exp(f.intercept_log) == doctest::Approx(3.0).epsilon(1e-12));
    }
  }
  SUBCASE("fractional growth rounds N up") {
    const auto f = classify_sups(eps, power_sups(1.0, -1.5), 4);
    CHECK(f.N == 2);
  }
  SUBCASE("fast decay is negligible, slow decay is not") {
    CHECK(classify_sups(eps, power_sups(1.0, 8.0), 8).classification == Classification::negligible);
    CHECK(classify_sups(eps, power_sups(1.0, 2.0), 8).classification == Classification::moderate);
    // The threshold follows the mollifier order when it is low.
    CHECK(classify_sups(eps, power_sups(1.0, 2.0), 0).classification == Classification::negligible);
  }
  SUBCASE("exponential growth is non-moderate") {
    std::vector<double> s;
    for (double e : eps) s.push_back(std::exp(1.0 / e));
    const auto f = classify_sups(eps, s, 4);
    CHECK(f.classification == Classification::non_moderate);
  }
  SUBCASE("overflow is non-moderate") {
    auto s = power_sups(1.0, -1.0);
    s.back() = std::numeric_limits<double>::infinity();
    CHECK(classify_sups(eps, s, 4).classification == Classification::non_moderate);
  }
  SUBCASE("exponential decay is negligible") {
    std::vector<double> s;
    for (double e : eps) s.push_back(std::exp(-1.0 / e));
    CHECK(classify_sups(eps, s, 4).classification == Classification::negligible);
  }
  SUBCASE("zeros") {
    CHECK(classify_sups(eps, std::vector<double>(eps.size(), 0.0), 4).classification ==
          Classification::negligible);
    auto s = power_sups(1.0, 3.0);
    s[3] = 0.0;
    CHECK(classify_sups(eps, s, 4).classification == Classification::indeterminate);
    auto t = power_sups(1.0, 3.0);
    for (std::size_t k = 6; k < t.size(); ++k) t[k] = 0.0;
    CHECK(classify_sups(eps, t, 4).classification == Classification::negligible);
  }
  SUBCASE("noise that follows no power law is indeterminate") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    std::vector<double> s;
    for (std::size_t k = 0; k < eps.size(); ++k) s.push_back(std::exp(u(rng)));
    CHECK(classify_sups(eps, s, 4).classification == Classification::indeterminate);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(classify_sups({0.5, 0.25, 0.125}, {1.0, 1.0, 1.0}, 4), InvalidArgument);
    CHECK_THROWS_AS(classify_sups(eps, {1.0, 2.0}, 4), InvalidArgument);
  }
}

TEST_CASE("classification is invariant under scaling the sups") {
  const auto eps = ladder_values();
  for (double slope : {-2.0, -0.5, 0.0, 9.0}) {
    const auto a = classify_sups(eps, power_sups(1.0, slope), 8);
    const auto b = classify_sups(eps, power_sups(1e-3, slope), 8);
    const auto c = classify_sups(eps, power_sups(1e5, slope), 8);
    CHECK(a.classification == b.classification);
    CHECK(a.classification == c.classification);
    CHECK(a.slope == doctest::Approx(c.slope).epsilon(1e-10));
  }
}

TEST_CASE("aggregation lets the worst fit govern") {
  const auto eps = ladder_values();
  auto mod = classify_sups(eps, power_sups(1.0, -1.0), 4);
  auto neg = classify_sups(eps, power_sups(1.0, 9.0), 4);
  std::vector<double> e;
  for (double x : eps) e.push_back(std::exp(1.0 / x));
  auto non = classify_sups(eps, e, 4);
  mod.alpha = 0;
  neg.alpha = 1;
  non.alpha = 2;
  CHECK(aggregate({mod, neg}, std::nullopt).classification == Classification::moderate);
  CHECK(aggregate({neg, neg}, std::nullopt).classification == Classification::negligible);
  CHECK(aggregate({mod, non, neg}, std::nullopt).classification == Classification::non_moderate);
  CHECK_THROWS_AS(aggregate({}, std::nullopt), InvalidArgument);
}

TEST_CASE("sup norms of embedded distributions") {
  const Mollifier& m = gauss0();
  const Interval K{-1.0, 1.0};
  for (double eps : {0.3, 0.1, 0.01}) {
    const Representative d(embed(Dist::delta()), m);
    CHECK(sup_norm(d, eps, K, 0) == doctest::Approx(1.0 / (eps * std::sqrt(std::numbers::pi))).epsilon(1e-12));
    const Representative h(embed(Dist::heaviside()), m);
    const double sh = sup_norm(h, eps, K, 0);
    CHECK(sh <= 1.0 + 1e-12);
    CHECK(sh >= 0.5 * std::erfc(-1.0 / eps));
    CHECK(sup_norm(Representative(zero(), m), eps, K, 0) == 0.0);
  }
  // Weighted sups over a far compact shrink by the weight.
  const Representative one_rep(one(), m);
  CHECK(sup_norm(one_rep, 0.1, Interval{2.0, 3.0}, 0, 2) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("classification of embedded exemplars") {
  const Mollifier& m = gauss0();
  const auto cfg = light_config(1);
  SUBCASE("delta and its square") {
    const auto d = classify(embed(Dist::delta()), m, cfg);
    CHECK(d.classification == Classification::moderate);
    CHECK(d.N == 1);
    const auto d2 = classify(power(embed(Dist::delta()), 2), m, cfg);
    CHECK(d2.classification == Classification::moderate);
    CHECK(d2.N == 2);
  }
  SUBCASE("smooth functions are bounded") {
    const auto s = classify(smooth(Smooth::sin()), m, cfg);
    CHECK(s.classification == Classification::moderate);
    CHECK(s.N == 0);
    for (const auto& f : s.fits) CHECK(f.slope >= -0.1);
  }
  SUBCASE("exp of delta is not moderate") {
    CHECK(classify(compose(Smooth::exp(), embed(Dist::delta())), m, cfg).classification ==
          Classification::non_moderate);
  }
  SUBCASE("the zero expression is negligible") {
    CHECK(classify(zero(), m, cfg).classification == Classification::negligible);
  }
}

TEST_CASE("one derivative costs at most one power of eps") {
  const Mollifier& m = gauss0();
  const auto cfg = light_config(1);
  const std::vector<Expr> zoo{embed(Dist::delta()), embed(Dist::heaviside()), embed(Dist::abs()),
                              embed(Dist::sign()), power(embed(Dist::delta()), 2),
                              product({embed(Dist::heaviside()), embed(Dist::delta())})};
  for (const auto& g : zoo) {
    const auto r = classify(g, m, cfg);
    double s0 = 0.0, s1 = 0.0;
    for (const auto& f : r.fits) (f.alpha == 0 ? s0 : s1) = f.slope;
    INFO(to_string(g));
    CHECK(s1 >= s0 - 1.0 - 0.1);
  }
}
