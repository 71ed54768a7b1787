#pragma once

#include "colombeau/jet.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace colombeau {

/// Smooth function kinds allowed as directly included functions and as outer functions of Compose.
enum class SmoothKind { sin, cos, exp, poly };

class Smooth {
 public:
  static Smooth sin() { return Smooth(SmoothKind::sin, {}); }
  static Smooth cos() { return Smooth(SmoothKind::cos, {}); }
  static Smooth exp() { return Smooth(SmoothKind::exp, {}); }
  /// sum_k coeffs[k] x^k; an empty list is the zero polynomial.
  static Smooth poly(std::vector<double> coeffs);

  SmoothKind kind() const { return kind_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  double operator()(double x) const;
  /// f^(k)(x).
  double derivative(int k, double x) const;
  /// Taylor jet of f at x.
  Jet jet(double x, int order) const;
  /// Taylor jet of f composed with the jet a.
  Jet compose(const Jet& a) const;

  int degree() const;  ///< polynomial degree; -1 for the zero polynomial and for non-polynomials

  friend bool operator==(const Smooth&, const Smooth&) = default;

 private:
  Smooth(SmoothKind k, std::vector<double> c) : kind_(k), coeffs_(std::move(c)) {}
  SmoothKind kind_;
  std::vector<double> coeffs_;
};

/// exp(-1 / (1 - u^2)) for |u| < 1 with u = (x - center) / radius, times normalization.
struct Bump {
  double center = 0.0;
  double radius = 1.0;
  double normalization = 1.0;

  double operator()(double x) const;
  Jet jet(double x, int order) const;

  friend bool operator==(const Bump&, const Bump&) = default;
};

enum class DistTag { delta, heaviside, abs, sign, power_plus, pv_inverse, polynomial, smooth_test, smooth };

/// A distribution that can be embedded through the mollifier.
class Dist {
 public:
  static Dist delta() { return Dist(DistTag::delta); }
  static Dist heaviside() { return Dist(DistTag::heaviside); }
  static Dist abs() { return Dist(DistTag::abs); }
  static Dist sign() { return Dist(DistTag::sign); }
  /// x_+^r with 0 < r < 1.
  static Dist power_plus(double r);
  /// Principal value of 1/x.
  static Dist pv_inverse() { return Dist(DistTag::pv_inverse); }
  static Dist polynomial(std::vector<double> coeffs);
  static Dist smooth_test(Bump bump);
  /// A smooth function embedded by convolution (as opposed to directly included).
  static Dist smooth(Smooth f);

  DistTag tag() const { return tag_; }
  double exponent() const { return r_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const Bump& bump() const { return bump_; }
  const Smooth& function() const { return f_; }

  /// Classical pointwise value; pv_inverse is 1/x away from 0 and delta is 0 away from 0.
  double classical(double x) const;

  friend bool operator==(const Dist&, const Dist&) = default;

 private:
  explicit Dist(DistTag t) : tag_(t) {}
  DistTag tag_;
  double r_ = 0.0;
  std::vector<double> coeffs_;
  Bump bump_;
  Smooth f_ = Smooth::poly({});
};

struct ExprNode;

/**
 Immutable expression over embedded distributions and smooth functions.

 Closed under sums, products, scaling, derivatives and composition with an outer
 smooth function. Subtrees are shared, so copies are cheap.
 */
class Expr {
 public:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  const ExprNode& node() const { return *node_; }
  const ExprNode* get() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct EmbedNode { Dist dist; };
struct SmoothNode { Smooth f; };
/// (f)_eps - f: embedded minus directly included.
struct ResidualNode { Smooth f; };
struct SumNode { std::vector<Expr> args; };
struct ProductNode { std::vector<Expr> args; };
struct ScaleNode { double c; Expr arg; };
struct DerivativeNode { int order; Expr arg; };
struct ComposeNode { Smooth outer; Expr arg; };

struct ExprNode {
  std::variant<EmbedNode, SmoothNode, ResidualNode, SumNode, ProductNode, ScaleNode, DerivativeNode, ComposeNode> v;
};

Expr embed(Dist d);
Expr smooth(Smooth f);
Expr residual(Smooth f);
Expr sum(std::vector<Expr> args);
Expr product(std::vector<Expr> args);
Expr scale(double c, Expr e);
Expr derivative(int order, Expr e);
Expr compose(Smooth outer, Expr e);

Expr zero();
Expr one();
/// The directly included coordinate function x.
Expr coordinate();

inline Expr operator+(Expr a, Expr b) { return sum({std::move(a), std::move(b)}); }
inline Expr operator*(Expr a, Expr b) { return product({std::move(a), std::move(b)}); }
inline Expr operator*(double c, Expr e) { return scale(c, std::move(e)); }
inline Expr operator-(Expr e) { return scale(-1.0, std::move(e)); }
inline Expr operator-(Expr a, Expr b) { return sum({std::move(a), scale(-1.0, std::move(b))}); }

/// n-fold product of e with itself.
Expr power(const Expr& e, int n);

/// Compact human-readable rendering, e.g. "D^2(abs)" or "(delta * heaviside)".
std::string to_string(const Expr& e);
std::string to_string(const Dist& d);
std::string to_string(const Smooth& f);

}  // namespace colombeau
