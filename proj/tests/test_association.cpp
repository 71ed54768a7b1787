#include "colombeau/association.hpp"
#include "colombeau/errors.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace colombeau;

namespace {

template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

const Mollifier& gauss0() {
  static const Mollifier m = make_moment_mollifier(0);
  return m;
}

Representative rep(Expr e) { return Representative(std::move(e), gauss0()); }

std::vector<double> ladder() { return EpsLadder::geometric().values(); }

PairingResult synthetic(double (*f)(double)) {
  std::vector<double> v, err;
  for (double e : ladder()) {
    v.push_back(f(e));
    err.push_back(1e-15);
  }
  return extrapolate(ladder(), v, err);
}

}  // namespace

TEST_CASE("extrapolation of synthetic pairing sequences") {
  SUBCASE("power-law correction") {
    const auto r = synthetic([](double e) { return 0.7 + 3.0 * e * e; });
    REQUIRE(r.status == PairingStatus::converged);
    CHECK(*r.limit == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(*r.correction_power == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("fractional correction") {
    const auto r = synthetic([](double e) { return -1.25 + 0.4 * std::sqrt(e); });
    REQUIRE(r.status == PairingStatus::converged);
    CHECK(*r.limit == doctest::Approx(-1.25).epsilon(1e-8));
    CHECK(*r.correction_power == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("constant sequence") {
    const auto r = synthetic([](double) { return 2.5; });
    REQUIRE(r.status == PairingStatus::converged);
    CHECK(*r.limit == 2.5);
  }
  SUBCASE("power divergence") {
    const auto r = synthetic([](double e) { return 0.3 / e; });
    REQUIRE(r.status == PairingStatus::divergent);
    CHECK(*r.divergence_exponent == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(*r.divergence_constant == doctest::Approx(0.3).epsilon(1e-9));
    const auto n = synthetic([](double e) { return -2.0 / (e * e); });
    REQUIRE(n.status == PairingStatus::divergent);
    CHECK(*n.divergence_exponent == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(*n.divergence_constant == doctest::Approx(-2.0).epsilon(1e-9));
  }
  SUBCASE("logarithmic growth and oscillation are indeterminate") {
    CHECK(synthetic([](double e) { return std::log(e); }).status == PairingStatus::indeterminate);
    CHECK(synthetic([](double e) { return std::sin(1.0 / e); }).status == PairingStatus::indeterminate);
  }
  SUBCASE("non-finite values are indeterminate") {
    CHECK(synthetic([](double e) { return e < 0.01 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }).status ==
          PairingStatus::indeterminate);
  }
}

TEST_CASE("delta pairs to the value at the origin") {
  const auto d = rep(embed(Dist::delta()));
  for (const auto& T : default_probes()) {
    const auto r = pair(d, T, EpsLadder::geometric());
    INFO("center " << T.center << " radius " << T.radius);
    REQUIRE(r.status == PairingStatus::converged);
    CHECK(testutil::near(*r.limit, T(0.0), 1e-8, 1e-12));
  }
}

TEST_CASE("delta squared diverges like 1/eps with the L2 mass of the mollifier") {
  const auto d2 = rep(power(embed(Dist::delta()), 2));
  const Mollifier& m = gauss0();
  const double l2 = simpson([&](double u) { return m(u) * m(u); }, -12.0, 12.0, 4000);
  CHECK(l2 == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  const TestFunction T{0.0, 1.0, 1.0};
  const auto r = pair(d2, T, EpsLadder::geometric());
  REQUIRE(r.status == PairingStatus::divergent);
  CHECK(*r.divergence_exponent == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(*r.divergence_constant == doctest::Approx(T(0.0) * l2).epsilon(1e-3));
}

TEST_CASE("association verdicts") {
  const auto H = embed(Dist::heaviside());
  const auto d = embed(Dist::delta());
  CHECK(associated(rep(power(H, 2)), rep(H)).verdict == Association::associated);
  CHECK(associated(rep(scale(2.0, product({d, H}))), rep(d)).verdict == Association::associated);
  CHECK(associated(rep(product({coordinate(), d})), rep(zero())).verdict == Association::associated);
  CHECK(associated(rep(d), rep(scale(2.0, d))).verdict == Association::not_associated);
  CHECK(associated(rep(H), rep(zero())).verdict == Association::not_associated);
  // delta squared diverges, so it is associated with no distribution.
  CHECK(associated(rep(power(d, 2)), rep(d)).verdict == Association::not_associated);
}

TEST_CASE("association is transitive and compatible with derivatives on powers of H") {
  const auto H = embed(Dist::heaviside());
  const std::vector<Expr> chain{H, power(H, 2), power(H, 3)};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = i + 1; j < chain.size(); ++j) {
      INFO(to_string(chain[i]) << " vs " << to_string(chain[j]));
      CHECK(associated(rep(chain[i]), rep(chain[j])).verdict == Association::associated);
      CHECK(associated(rep(derivative(1, chain[i])), rep(derivative(1, chain[j]))).verdict ==
            Association::associated);
    }
  }
}

TEST_CASE("shadows agree with classical pairings") {
  const auto probes = default_probes();
  SUBCASE("continuous products") {
    const auto g = product({embed(Dist::abs()), embed(Dist::power_plus(0.5))});
    const auto res = shadow_report(rep(g), probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      const auto& T = probes[i];
      const double direct =
          integrate([&](double x) { return std::abs(x) * std::sqrt(std::max(x, 0.0)) * T(x); }, T.center - T.radius,
                    T.center + T.radius, QuadOptions{1e-14, 1e-13, 4000}, std::vector<double>{0.0})
              .value;
      INFO("probe " << i);
      REQUIRE(res[i].status == PairingStatus::converged);
      CHECK(testutil::near(*res[i].limit, direct, 1e-5, 1e-7));
    }
  }
  SUBCASE("embedded distributions") {
    for (const auto& d : {Dist::power_plus(0.5), Dist::heaviside(), Dist::abs(), Dist::sign(), Dist::pv_inverse(),
                          Dist::polynomial({1.0, -2.0, 0.5})}) {
      const auto res = shadow_report(rep(embed(d)), probes);
      for (std::size_t i = 0; i < probes.size(); ++i) {
        INFO(to_string(embed(d)) << " probe " << i);
        REQUIRE(res[i].status == PairingStatus::converged);
        CHECK(testutil::near(*res[i].limit, classical_pairing(d, probes[i]), 1e-6, 1e-8));
      }
    }
  }
  SUBCASE("smooth times delta") {
    const auto g = product({smooth(Smooth::poly({2.0, 1.0})), embed(Dist::delta())});
    const auto res = shadow_report(rep(g), probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      REQUIRE(res[i].status == PairingStatus::converged);
      CHECK(testutil::near(*res[i].limit, 2.0 * probes[i](0.0), 1e-7, 1e-10));
    }
  }
  SUBCASE("derivative of H cubed") {
    const auto res = shadow_report(rep(derivative(1, power(embed(Dist::heaviside()), 3))), probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
      REQUIRE(res[i].status == PairingStatus::converged);
      INFO("probe " << i << " limit " << *res[i].limit << " T(0) " << probes[i](0.0) << " " << res[i].note);
      CHECK(testutil::near(*res[i].limit, probes[i](0.0), 1e-7, 1e-10));
    }
  }
}

TEST_CASE("classical pairings") {
  const TestFunction T{0.2, 1.0, 1.0};
  CHECK(classical_pairing(Dist::delta(), T) == T(0.0));
  const TestFunction even{0.0, 1.0, 1.0};
  CHECK(std::abs(classical_pairing(Dist::pv_inverse(), even)) < 1e-14);
  CHECK(std::abs(classical_pairing(Dist::sign(), even)) < 1e-14);
  const double h = classical_pairing(Dist::heaviside(), even);
  CHECK(h == doctest::Approx(0.5 * classical_pairing(Dist::polynomial({1.0}), even)).epsilon(1e-12));
}

TEST_CASE("H^2 H' identity integrates to -1/6 for both mollifier families") {
  for (const auto& m : {make_moment_mollifier(0), make_moment_mollifier(4), make_ft_plateau_mollifier(1.5, 9.0)}) {
    const auto r = exact_identity_check_H2H(m, EpsLadder::geometric(0.5, 0.5, 6));
    CHECK(r.max_deviation < 1e-8);
    CHECK(r.mean == doctest::Approx(-1.0 / 6.0).epsilon(1e-9));
    CHECK(r.stddev < 1e-9);
  }
}

TEST_CASE("self-energy scales like 1/eps") {
  const Mollifier& m = gauss0();
  const auto r = self_energy_scan(m, EpsLadder::geometric(0.5, 0.5, 6));
  const double expected = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi));
  for (double s : r.scaled) CHECK(s == doctest::Approx(expected).epsilon(1e-10));
  CHECK(r.max_spread < 1e-10);
  CHECK(self_energy(m, 0.1, 2.0) == doctest::Approx(4.0 * self_energy(m, 0.1, 1.0)).epsilon(1e-14));
  // Energy against an independent Simpson integral of delta_eps^2.
  const double eps = 0.05;
  const double direct = 0.5 * simpson([&](double x) { return std::pow(m(x / eps) / eps, 2); }, -0.6, 0.6, 4000);
  CHECK(self_energy(m, eps) == doctest::Approx(direct).epsilon(1e-9));
  CHECK_THROWS_AS(self_energy(m, 0.0), InvalidArgument);
}

TEST_CASE("products of x, pv(1/x) and delta cannot be associative") {
  const TestFunction T{0.0, 1.0, 1.0};
  const auto r = impossibility_demo(gauss0(), T);
  CHECK(r.x_pv_associates_one);
  CHECK(r.x_delta_associates_zero);
  CHECK(r.parenthesization_gap <= 1e-12);
  CHECK(r.samples > 0);
  REQUIRE(r.triple_constant);
  // Independent oracle: the triple product pairs to T(0) int u pv_1(u) eta(u) du, with pv_1 = 2 Dawson for the
  // Gaussian kernel.
  const auto dawson = [](double u) {
    return simpson([u](double t) { return std::exp(t * t - u * u); }, 0.0, u, 2000);
  };
  const Mollifier& m = gauss0();
  const double c = simpson([&](double u) { return u * 2.0 * dawson(u) * m(u); }, -9.0, 9.0, 1800);
  CHECK(c == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(*r.triple_constant == doctest::Approx(c).epsilon(1e-7));
}
