#include "colombeau/expr.hpp"

#include "colombeau/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace colombeau {

namespace {
Jet jet_exp(const Jet& a) { return exp(a); }
}  // namespace

// ---------------------------------------------------------------- Smooth

Smooth Smooth::poly(std::vector<double> coeffs) {
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw InvalidArgument("Smooth::poly: coefficients must be finite");
  }
  while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
  return Smooth(SmoothKind::poly, std::move(coeffs));
}

int Smooth::degree() const { return kind_ == SmoothKind::poly ? static_cast<int>(coeffs_.size()) - 1 : -1; }

double Smooth::operator()(double x) const { return derivative(0, x); }

double Smooth::derivative(int k, double x) const {
  switch (kind_) {
    case SmoothKind::sin: return std::sin(x + 0.5 * k * std::numbers::pi);
    case SmoothKind::cos: return std::cos(x + 0.5 * k * std::numbers::pi);
    case SmoothKind::exp: return std::exp(x);
    case SmoothKind::poly: {
      double v = 0.0;
      for (int i = static_cast<int>(coeffs_.size()) - 1; i >= k; --i) {
        double falling = 1.0;
        for (int j = 0; j < k; ++j) falling *= (i - j);
        v = v * x + coeffs_[i] * falling;
      }
      return v;
    }
  }
  return 0.0;
}

Jet Smooth::jet(double x, int order) const { return compose(Jet::variable(x, order)); }

Jet Smooth::compose(const Jet& a) const {
  switch (kind_) {
    case SmoothKind::sin: return sincos(a).first;
    case SmoothKind::cos: return sincos(a).second;
    case SmoothKind::exp: return jet_exp(a);
    case SmoothKind::poly: {
      Jet r = Jet::constant(0.0, a.order());
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * a + *it;
      return r;
    }
  }
  return a;
}

// ---------------------------------------------------------------- Bump

double Bump::operator()(double x) const {
  const double u = (x - center) / radius;
  if (!(std::abs(u) < 1.0)) return 0.0;
  return normalization * std::exp(-1.0 / (1.0 - u * u));
}

Jet Bump::jet(double x, int order) const {
  const double u0 = (x - center) / radius;
  if (!(std::abs(u0) < 1.0)) return Jet::constant(0.0, order);
  Jet u = Jet::variable(u0, order);
  Jet::Coefficients c = u.coefficients();
  if (order >= 1) c(1) = 1.0 / radius;
  u = Jet(c);
  return normalization * jet_exp(-1.0 * reciprocal(1.0 - u * u));
}

// ---------------------------------------------------------------- Dist

Dist Dist::power_plus(double r) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("Dist::power_plus: exponent must lie in (0, 1)");
  Dist d(DistTag::power_plus);
  d.r_ = r;
  return d;
}

Dist Dist::polynomial(std::vector<double> coeffs) {
  Dist d(DistTag::polynomial);
  d.coeffs_ = Smooth::poly(std::move(coeffs)).coeffs();
  return d;
}

Dist Dist::smooth_test(Bump bump) {
  if (!(bump.radius > 0.0) || !std::isfinite(bump.center) || !std::isfinite(bump.normalization)) {
    throw InvalidArgument("Dist::smooth_test: bump radius must be positive");
  }
  Dist d(DistTag::smooth_test);
  d.bump_ = bump;
  return d;
}

Dist Dist::smooth(Smooth f) {
  Dist d(DistTag::smooth);
  d.f_ = std::move(f);
  return d;
}

double Dist::classical(double x) const {
  switch (tag_) {
    case DistTag::delta: return 0.0;
    case DistTag::heaviside: return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5);
    case DistTag::abs: return std::abs(x);
    case DistTag::sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case DistTag::power_plus: return x > 0.0 ? std::pow(x, r_) : 0.0;
    case DistTag::pv_inverse: return x != 0.0 ? 1.0 / x : 0.0;
    case DistTag::polynomial: return Smooth::poly(coeffs_)(x);
    case DistTag::smooth_test: return bump_(x);
    case DistTag::smooth: return f_(x);
  }
  return 0.0;
}

// ---------------------------------------------------------------- Expr

namespace {
Expr make(auto node) { return Expr(std::make_shared<const ExprNode>(ExprNode{std::move(node)})); }
}  // namespace

Expr embed(Dist d) { return make(EmbedNode{std::move(d)}); }
Expr smooth(Smooth f) { return make(SmoothNode{std::move(f)}); }
Expr residual(Smooth f) { return make(ResidualNode{std::move(f)}); }

Expr sum(std::vector<Expr> args) {
  if (args.empty()) throw InvalidArgument("sum: at least one argument required");
  return make(SumNode{std::move(args)});
}

Expr product(std::vector<Expr> args) {
  if (args.empty()) throw InvalidArgument("product: at least one argument required");
  return make(ProductNode{std::move(args)});
}

Expr scale(double c, Expr e) {
  if (!std::isfinite(c)) throw InvalidArgument("scale: factor must be finite");
  return make(ScaleNode{c, std::move(e)});
}

Expr derivative(int order, Expr e) {
  if (order < 1) throw InvalidArgument("derivative: order must be at least 1");
  return make(DerivativeNode{order, std::move(e)});
}

Expr compose(Smooth outer, Expr e) { return make(ComposeNode{std::move(outer), std::move(e)}); }

Expr zero() { return smooth(Smooth::poly({})); }
Expr one() { return smooth(Smooth::poly({1.0})); }
Expr coordinate() { return smooth(Smooth::poly({0.0, 1.0})); }

Expr power(const Expr& e, int n) {
  if (n < 1) throw InvalidArgument("power: exponent must be at least 1");
  if (n == 1) return e;
  return product(std::vector<Expr>(n, e));
}

namespace {

bool same_args(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

struct NodeEqual {
  bool operator()(const EmbedNode& a, const EmbedNode& b) const { return a.dist == b.dist; }
  bool operator()(const SmoothNode& a, const SmoothNode& b) const { return a.f == b.f; }
  bool operator()(const ResidualNode& a, const ResidualNode& b) const { return a.f == b.f; }
  bool operator()(const SumNode& a, const SumNode& b) const { return same_args(a.args, b.args); }
  bool operator()(const ProductNode& a, const ProductNode& b) const { return same_args(a.args, b.args); }
  bool operator()(const ScaleNode& a, const ScaleNode& b) const { return a.c == b.c && a.arg == b.arg; }
  bool operator()(const DerivativeNode& a, const DerivativeNode& b) const {
    return a.order == b.order && a.arg == b.arg;
  }
  bool operator()(const ComposeNode& a, const ComposeNode& b) const { return a.outer == b.outer && a.arg == b.arg; }
  template <class A, class B>
  bool operator()(const A&, const B&) const { return false; }
};

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  return std::visit(NodeEqual{}, a.node().v, b.node().v);
}

// ---------------------------------------------------------------- rendering

std::string to_string(const Smooth& f) {
  switch (f.kind()) {
    case SmoothKind::sin: return "sin";
    case SmoothKind::cos: return "cos";
    case SmoothKind::exp: return "exp";
    case SmoothKind::poly: {
      std::ostringstream s;
      s << "poly[";
      for (std::size_t i = 0; i < f.coeffs().size(); ++i) s << (i ? "," : "") << f.coeffs()[i];
      s << "]";
      return s.str();
    }
  }
  return "?";
}

std::string to_string(const Dist& d) {
  std::ostringstream s;
  switch (d.tag()) {
    case DistTag::delta: return "delta";
    case DistTag::heaviside: return "heaviside";
    case DistTag::abs: return "abs";
    case DistTag::sign: return "sign";
    case DistTag::power_plus: s << "power_plus(" << d.exponent() << ")"; return s.str();
    case DistTag::pv_inverse: return "pv_inverse";
    case DistTag::polynomial: return "[" + to_string(Smooth::poly(d.coeffs())) + "]";
    case DistTag::smooth_test:
      s << "bump(" << d.bump().center << "," << d.bump().radius << ")";
      return s.str();
    case DistTag::smooth: return "[" + to_string(d.function()) + "]";
  }
  return "?";
}

namespace {

std::string join(const std::vector<Expr>& args, const char* sep) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? sep : "") + to_string(args[i]);
  return out + ")";
}

struct Render {
  std::string operator()(const EmbedNode& n) const { return to_string(n.dist); }
  std::string operator()(const SmoothNode& n) const { return to_string(n.f); }
  std::string operator()(const ResidualNode& n) const { return "residual(" + to_string(n.f) + ")"; }
  std::string operator()(const SumNode& n) const { return join(n.args, " + "); }
  std::string operator()(const ProductNode& n) const { return join(n.args, " * "); }
  std::string operator()(const ScaleNode& n) const {
    std::ostringstream s;
    s << n.c << "*" << to_string(n.arg);
    return s.str();
  }
  std::string operator()(const DerivativeNode& n) const {
    return "D^" + std::to_string(n.order) + "(" + to_string(n.arg) + ")";
  }
  std::string operator()(const ComposeNode& n) const { return to_string(n.outer) + "(" + to_string(n.arg) + ")"; }
};

}  // namespace

std::string to_string(const Expr& e) { return std::visit(Render{}, e.node().v); }

}  // namespace colombeau
