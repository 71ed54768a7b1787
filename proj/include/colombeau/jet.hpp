#pragma once

#include <Eigen/Core>

#include <cassert>
#include <cmath>
#include <span>

namespace colombeau {

/**
 Truncated Taylor expansion of a function around a point.

 Coefficient k holds f^(k)(x0) / k!, so products are plain Cauchy products and
 composition with an outer function reduces to a power series in (g - g(x0)).
 Every arithmetic operation keeps the order of the left operand; mixing jets of
 different order is a logic error.
 */
template <class Scalar>
class BasicJet {
 public:
  using Coefficients = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  BasicJet() : c_(Coefficients::Zero(1)) {}
  explicit BasicJet(Coefficients c) : c_(std::move(c)) { assert(c_.size() > 0); }

  static BasicJet constant(Scalar value, int order) {
    Coefficients c = Coefficients::Zero(order + 1);
    c(0) = value;
    return BasicJet(std::move(c));
  }

  /// The identity function x -> x expanded around x0.
  static BasicJet variable(Scalar x0, int order) {
    auto j = constant(x0, order);
    if (order >= 1) j.c_(1) = Scalar(1);
    return j;
  }

  /// Build from plain derivative values d[k] = f^(k)(x0).
  static BasicJet from_derivatives(std::span<const Scalar> d) {
    Coefficients c(static_cast<Eigen::Index>(d.size()));
    Scalar fact = 1;
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (k > 0) fact *= Scalar(k);
      c(static_cast<Eigen::Index>(k)) = d[k] / fact;
    }
    return BasicJet(std::move(c));
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Scalar value() const { return c_(0); }
  Scalar coefficient(int k) const { return c_(k); }
  const Coefficients& coefficients() const { return c_; }

  /// f^(k)(x0).
  Scalar derivative(int k) const {
    Scalar fact = 1;
    for (int i = 2; i <= k; ++i) fact *= Scalar(i);
    return c_(k) * fact;
  }

  /// Jet of f' with order reduced by one.
  BasicJet differentiated() const {
    if (order() == 0) return constant(Scalar(0), 0);
    Coefficients d(order());
    for (int k = 0; k < order(); ++k) d(k) = Scalar(k + 1) * c_(k + 1);
    return BasicJet(std::move(d));
  }

  BasicJet truncated(int order) const { return BasicJet(c_.head(order + 1)); }

  BasicJet& operator+=(const BasicJet& o) { c_ += o.c_; return *this; }
  BasicJet& operator-=(const BasicJet& o) { c_ -= o.c_; return *this; }
  BasicJet& operator*=(Scalar s) { c_ *= s; return *this; }

  BasicJet& operator*=(const BasicJet& o) {
    const int n = order();
    Coefficients r = Coefficients::Zero(n + 1);
    for (int k = 0; k <= n; ++k) {
      for (int i = 0; i <= k; ++i) r(k) += c_(i) * o.c_(k - i);
    }
    c_ = std::move(r);
    return *this;
  }

  friend BasicJet operator+(BasicJet a, const BasicJet& b) { return a += b; }
  friend BasicJet operator-(BasicJet a, const BasicJet& b) { return a -= b; }
  friend BasicJet operator*(BasicJet a, const BasicJet& b) { return a *= b; }
  friend BasicJet operator*(Scalar s, BasicJet a) { return a *= s; }
  friend BasicJet operator*(BasicJet a, Scalar s) { return a *= s; }
  friend BasicJet operator-(BasicJet a) { a.c_ = -a.c_; return a; }
  friend BasicJet operator+(BasicJet a, Scalar s) { a.c_(0) += s; return a; }
  friend BasicJet operator+(Scalar s, BasicJet a) { a.c_(0) += s; return a; }
  friend BasicJet operator-(Scalar s, BasicJet a) { a.c_ = -a.c_; a.c_(0) += s; return a; }

  friend BasicJet reciprocal(const BasicJet& a) {
    const int n = a.order();
    Coefficients r(n + 1);
    r(0) = Scalar(1) / a.c_(0);
    for (int k = 1; k <= n; ++k) {
      Scalar s = 0;
      for (int i = 1; i <= k; ++i) s += a.c_(i) * r(k - i);
      r(k) = -s * r(0);
    }
    return BasicJet(std::move(r));
  }

  friend BasicJet operator/(const BasicJet& a, const BasicJet& b) { return a * reciprocal(b); }

  friend BasicJet exp(const BasicJet& a) {
    const int n = a.order();
    Coefficients e(n + 1);
    e(0) = std::exp(a.c_(0));
    for (int k = 1; k <= n; ++k) {
      Scalar s = 0;
      for (int i = 1; i <= k; ++i) s += Scalar(i) * a.c_(i) * e(k - i);
      e(k) = s / Scalar(k);
    }
    return BasicJet(std::move(e));
  }

  /// sin and cos of a jet, computed together by the coupled recurrence.
  friend std::pair<BasicJet, BasicJet> sincos(const BasicJet& a) {
    const int n = a.order();
    Coefficients s(n + 1), c(n + 1);
    s(0) = std::sin(a.c_(0));
    c(0) = std::cos(a.c_(0));
    for (int k = 1; k <= n; ++k) {
      Scalar ss = 0, cc = 0;
      for (int i = 1; i <= k; ++i) {
        ss += Scalar(i) * a.c_(i) * c(k - i);
        cc += Scalar(i) * a.c_(i) * s(k - i);
      }
      s(k) = ss / Scalar(k);
      c(k) = -cc / Scalar(k);
    }
    return {BasicJet(std::move(s)), BasicJet(std::move(c))};
  }

  /// Logistic function 1 / (1 + exp(-a)); stable for any magnitude of a(x0).
  friend BasicJet logistic(const BasicJet& a) {
    const int n = a.order();
    // Taylor coefficients of sigma around y0 from sigma' = sigma * (1 - sigma),
    // carrying 1 - sigma separately so saturated arguments keep full precision.
    Coefficients s(n + 1), t(n + 1);
    const Scalar y0 = a.c_(0);
    const Scalar e = std::exp(-std::abs(y0));
    s(0) = y0 >= 0 ? Scalar(1) / (Scalar(1) + e) : e / (Scalar(1) + e);
    t(0) = y0 >= 0 ? e / (Scalar(1) + e) : Scalar(1) / (Scalar(1) + e);
    for (int k = 0; k < n; ++k) {
      Scalar st = 0;
      for (int i = 0; i <= k; ++i) st += s(i) * t(k - i);
      s(k + 1) = st / Scalar(k + 1);
      t(k + 1) = -s(k + 1);
    }
    return compose(s, a);
  }

  /// Compose an outer series sum_j outer[j] * u^j (u = a - a(x0)) with the jet a.
  friend BasicJet compose(const Coefficients& outer, const BasicJet& a) {
    const int n = a.order();
    BasicJet shifted = a;
    shifted.c_(0) = 0;
    BasicJet power = constant(Scalar(1), n);
    Coefficients r = Coefficients::Zero(n + 1);
    for (int j = 0; j <= n && j < outer.size(); ++j) {
      if (j > 0) power *= shifted;
      // A zero coefficient contributes nothing; skipping it also avoids inf * 0.
      if (outer(j) != Scalar(0)) r += outer(j) * power.c_;
    }
    return BasicJet(std::move(r));
  }

 private:
  Coefficients c_;
};

using Jet = BasicJet<double>;

}  // namespace colombeau
