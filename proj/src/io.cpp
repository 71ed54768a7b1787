#include "colombeau/io.hpp"

#include "colombeau/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

namespace colombeau {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing key \"") + key + "\" in " + j.dump());
  return j.at(key);
}

double real_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) fail(std::string("key \"") + key + "\" must be a number in " + j.dump());
  return v.get<double>();
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) fail(std::string("key \"") + key + "\" must be an integer in " + j.dump());
  return v.get<int>();
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) fail(std::string("key \"") + key + "\" must be a string in " + j.dump());
  return v.get<std::string>();
}

std::vector<double> real_list(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array()) fail(std::string("key \"") + key + "\" must be an array in " + j.dump());
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(std::string("key \"") + key + "\" must hold numbers in " + j.dump());
    out.push_back(x.get<double>());
  }
  return out;
}

void only_keys(const json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail("expected an object, got " + j.dump());
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail("unknown key \"" + k + "\" in " + j.dump());
  }
}

std::vector<Expr> args_from_json(const json& j) {
  const json& a = field(j, "args");
  if (!a.is_array() || a.empty()) fail("\"args\" must be a non-empty array in " + j.dump());
  std::vector<Expr> out;
  for (const auto& x : a) out.push_back(expr_from_json(x));
  return out;
}

json args_to_json(const std::vector<Expr>& args) {
  json a = json::array();
  for (const auto& e : args) a.push_back(to_json(e));
  return a;
}

json dist_to_json(const Dist& d) {
  json j{{"op", "embed"}};
  switch (d.tag()) {
    case DistTag::delta: j["dist"] = "delta"; break;
    case DistTag::heaviside: j["dist"] = "heaviside"; break;
    case DistTag::abs: j["dist"] = "abs"; break;
    case DistTag::sign: j["dist"] = "sign"; break;
    case DistTag::pv_inverse: j["dist"] = "pv_inverse"; break;
    case DistTag::power_plus:
      j["dist"] = "power_plus";
      j["r"] = d.exponent();
      break;
    case DistTag::polynomial:
      j["dist"] = "polynomial";
      j["coeffs"] = d.coeffs();
      break;
    case DistTag::smooth_test:
      j["dist"] = "smooth_test";
      j["center"] = d.bump().center;
      j["radius"] = d.bump().radius;
      j["normalization"] = d.bump().normalization;
      break;
    case DistTag::smooth: {
      j["dist"] = "smooth";
      const json f = to_json(d.function());
      for (const auto& [k, v] : f.items()) j[k] = v;
      break;
    }
  }
  return j;
}

Dist dist_from_json(const json& j) {
  const std::string name = string_field(j, "dist");
  if (name == "delta" || name == "heaviside" || name == "abs" || name == "sign" || name == "pv_inverse") {
    only_keys(j, {"op", "dist"});
    if (name == "delta") return Dist::delta();
    if (name == "heaviside") return Dist::heaviside();
    if (name == "abs") return Dist::abs();
    if (name == "sign") return Dist::sign();
    return Dist::pv_inverse();
  }
  if (name == "power_plus") {
    only_keys(j, {"op", "dist", "r"});
    return Dist::power_plus(real_field(j, "r"));
  }
  if (name == "polynomial") {
    only_keys(j, {"op", "dist", "coeffs"});
    return Dist::polynomial(real_list(j, "coeffs"));
  }
  if (name == "smooth_test") {
    only_keys(j, {"op", "dist", "center", "radius", "normalization"});
    Bump b{real_field(j, "center"), real_field(j, "radius"), 1.0};
    if (j.contains("normalization")) b.normalization = real_field(j, "normalization");
    return Dist::smooth_test(b);
  }
  if (name == "smooth") {
    only_keys(j, {"op", "dist", "name", "coeffs"});
    return Dist::smooth(smooth_from_json(j));
  }
  fail("unknown distribution \"" + name + "\"");
}

struct ToJson {
  json operator()(const EmbedNode& n) const { return dist_to_json(n.dist); }
  json operator()(const SmoothNode& n) const {
    json j = to_json(n.f);
    j["op"] = "smooth";
    return j;
  }
  json operator()(const ResidualNode& n) const {
    json j = to_json(n.f);
    j["op"] = "residual";
    return j;
  }
  json operator()(const SumNode& n) const { return {{"op", "sum"}, {"args", args_to_json(n.args)}}; }
  json operator()(const ProductNode& n) const { return {{"op", "product"}, {"args", args_to_json(n.args)}}; }
  json operator()(const ScaleNode& n) const { return {{"op", "scale"}, {"c", n.c}, {"arg", to_json(n.arg)}}; }
  json operator()(const DerivativeNode& n) const {
    return {{"op", "derive"}, {"order", n.order}, {"arg", to_json(n.arg)}};
  }
  json operator()(const ComposeNode& n) const {
    json j{{"op", "compose"}, {"outer", to_json(n.outer).at("name")}, {"arg", to_json(n.arg)}};
    if (n.outer.kind() == SmoothKind::poly) j["coeffs"] = n.outer.coeffs();
    return j;
  }
};

}  // namespace

// ---------------------------------------------------------------- expressions

json to_json(const Smooth& f) {
  switch (f.kind()) {
    case SmoothKind::sin: return {{"name", "sin"}};
    case SmoothKind::cos: return {{"name", "cos"}};
    case SmoothKind::exp: return {{"name", "exp"}};
    case SmoothKind::poly: return {{"name", "poly"}, {"coeffs", f.coeffs()}};
  }
  return {};
}

Smooth smooth_from_json(const json& j, const char* name_key) {
  const std::string name = string_field(j, name_key);
  if (name != "poly" && j.contains("coeffs")) fail("\"coeffs\" only applies to poly in " + j.dump());
  if (name == "sin") return Smooth::sin();
  if (name == "cos") return Smooth::cos();
  if (name == "exp") return Smooth::exp();
  if (name == "poly") return Smooth::poly(real_list(j, "coeffs"));
  fail("unknown smooth function \"" + name + "\"");
}

Expr expr_from_json(const json& j) {
  const std::string op = string_field(j, "op");
  if (op == "embed") return embed(dist_from_json(j));
  if (op == "smooth" || op == "residual") {
    only_keys(j, {"op", "name", "coeffs"});
    Smooth f = smooth_from_json(j);
    return op == "smooth" ? smooth(std::move(f)) : residual(std::move(f));
  }
  if (op == "sum" || op == "product") {
    only_keys(j, {"op", "args"});
    return op == "sum" ? sum(args_from_json(j)) : product(args_from_json(j));
  }
  if (op == "scale") {
    only_keys(j, {"op", "c", "arg"});
    return scale(real_field(j, "c"), expr_from_json(field(j, "arg")));
  }
  if (op == "derive") {
    only_keys(j, {"op", "order", "arg"});
    return derivative(int_field(j, "order"), expr_from_json(field(j, "arg")));
  }
  if (op == "compose") {
    only_keys(j, {"op", "outer", "coeffs", "arg"});
    return compose(smooth_from_json(j, "outer"), expr_from_json(field(j, "arg")));
  }
  fail("unknown op \"" + op + "\"");
}

json to_json(const Expr& e) { return std::visit(ToJson{}, e.node().v); }

json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return json::parse(text);
    std::ifstream in(text);
    if (!in) fail("cannot open \"" + text + "\"");
    return json::parse(in);
  } catch (const json::exception& ex) {
    fail(std::string("invalid JSON: ") + ex.what());
  }
}

// ---------------------------------------------------------------- mollifiers

Mollifier MollifierSpec::build() const {
  if (kind == MollifierKind::moment_gaussian) return make_moment_mollifier(q);
  return make_ft_plateau_mollifier(plateau, cutoff);
}

MollifierSpec mollifier_spec_from_json(const json& j) {
  MollifierSpec s;
  const std::string type = string_field(j, "type");
  if (type == "moment") {
    only_keys(j, {"type", "q"});
    s.kind = MollifierKind::moment_gaussian;
    s.q = int_field(j, "q");
  } else if (type == "ft_plateau") {
    only_keys(j, {"type", "plateau", "cutoff"});
    s.kind = MollifierKind::ft_plateau;
    if (j.contains("plateau")) s.plateau = real_field(j, "plateau");
    if (j.contains("cutoff")) s.cutoff = real_field(j, "cutoff");
  } else {
    fail("unknown mollifier type \"" + type + "\"");
  }
  return s;
}

json to_json(const MollifierSpec& s) {
  if (s.kind == MollifierKind::moment_gaussian) return {{"type", "moment"}, {"q", s.q}};
  return {{"type", "ft_plateau"}, {"plateau", s.plateau}, {"cutoff", s.cutoff}};
}

// ---------------------------------------------------------------- run configuration

void RunConfig::validate() const {
  if (!(tol.quadrature > 0.0) || !(tol.association > 0.0) || !(tol.fit_residual > 0.0)) {
    throw InvalidArgument("config: tolerances must be positive");
  }
  if (!(domain.lo < domain.hi)) throw InvalidArgument("config: domain must satisfy lo < hi");
  if (compacts.empty()) throw InvalidArgument("config: at least one compact required");
  for (const auto& k : compacts) {
    if (!(k.lo <= k.hi) || !domain.contains(k)) throw InvalidArgument("config: compacts must lie inside the domain");
  }
  if (alpha_max < 0) throw InvalidArgument("config: alpha_max must be non-negative");
  if (weight_m && *weight_m < 0) throw InvalidArgument("config: weight_m must be non-negative");
  if (probes.empty()) throw InvalidArgument("config: at least one probe required");
  for (const auto& p : probes) {
    if (!(p.radius > 0.0) || !domain.contains(Interval{p.center - p.radius, p.center + p.radius})) {
      throw InvalidArgument("config: probes must have positive radius and support inside the domain");
    }
  }
  (void)ladder.build();
}

EvalOptions RunConfig::eval_options() const {
  EvalOptions e;
  e.quad_tol = tol.quadrature;
  return e;
}

ClassifyConfig RunConfig::classify_config() const {
  ClassifyConfig c;
  c.ladder = ladder.build();
  c.compacts = compacts;
  c.alpha_max = alpha_max;
  c.weight_m = weight_m;
  c.domain = domain;
  c.eval = eval_options();
  c.fit.residual_max = tol.fit_residual;
  return c;
}

AssociationOptions RunConfig::association_options() const {
  AssociationOptions a;
  a.tol = tol.association;
  a.ladder = ladder.build();
  a.probes = probes;
  return a;
}

namespace {

Interval interval_from_json(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail("interval must be [lo, hi], got " + j.dump());
}

TestFunction probe_from_json(const json& j) {
  only_keys(j, {"center", "radius", "normalization"});
  TestFunction t{real_field(j, "center"), real_field(j, "radius"), 1.0};
  if (j.contains("normalization")) t.normalization = real_field(j, "normalization");
  return t;
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  only_keys(j, {"mollifier", "ladder", "domain", "compacts", "tolerances", "alpha_max", "weight_m", "probes", "out"});
  RunConfig c;
  if (j.contains("mollifier")) c.mollifier = mollifier_spec_from_json(j["mollifier"]);
  if (j.contains("ladder")) {
    const json& l = j["ladder"];
    only_keys(l, {"start", "ratio", "rungs"});
    if (l.contains("start")) c.ladder.start = real_field(l, "start");
    if (l.contains("ratio")) c.ladder.ratio = real_field(l, "ratio");
    if (l.contains("rungs")) c.ladder.rungs = int_field(l, "rungs");
  }
  if (j.contains("domain")) c.domain = interval_from_json(j["domain"]);
  if (j.contains("compacts")) {
    if (!j["compacts"].is_array()) fail("\"compacts\" must be an array");
    c.compacts.clear();
    for (const auto& k : j["compacts"]) c.compacts.push_back(interval_from_json(k));
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, {"quadrature", "association", "fit_residual"});
    if (t.contains("quadrature")) c.tol.quadrature = real_field(t, "quadrature");
    if (t.contains("association")) c.tol.association = real_field(t, "association");
    if (t.contains("fit_residual")) c.tol.fit_residual = real_field(t, "fit_residual");
  }
  if (j.contains("alpha_max")) c.alpha_max = int_field(j, "alpha_max");
  if (j.contains("weight_m") && !j["weight_m"].is_null()) c.weight_m = int_field(j, "weight_m");
  if (j.contains("probes")) {
    const json& p = j["probes"];
    if (p.is_string() && p.get<std::string>() == "default") {
      c.probes = default_probes();
    } else if (p.is_array()) {
      c.probes.clear();
      for (const auto& x : p) c.probes.push_back(probe_from_json(x));
    } else {
      fail("\"probes\" must be \"default\" or an array of bumps");
    }
  }
  if (j.contains("out")) c.out_dir = string_field(j, "out");
  try {
    c.validate();
  } catch (const InvalidArgument& ex) {
    fail(ex.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  json compacts = json::array();
  for (const auto& k : c.compacts) compacts.push_back(to_json(k));
  json probes = json::array();
  for (const auto& p : c.probes) probes.push_back(to_json(p));
  json j{{"mollifier", to_json(c.mollifier)},
         {"ladder", {{"start", c.ladder.start}, {"ratio", c.ladder.ratio}, {"rungs", c.ladder.rungs}}},
         {"domain", to_json(c.domain)},
         {"compacts", compacts},
         {"tolerances",
          {{"quadrature", c.tol.quadrature}, {"association", c.tol.association}, {"fit_residual", c.tol.fit_residual}}},
         {"alpha_max", c.alpha_max},
         {"weight_m", c.weight_m ? json(*c.weight_m) : json(nullptr)},
         {"probes", probes}};
  if (c.out_dir) j["out"] = c.out_dir->string();
  return j;
}

// ---------------------------------------------------------------- reports

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0.0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  fail("expected a number, got " + j.dump());
}

namespace {

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

}  // namespace

json to_json(const Interval& k) { return json::array({number(k.lo), number(k.hi)}); }

json to_json(const TestFunction& t) {
  return {{"center", t.center}, {"radius", t.radius}, {"normalization", t.normalization}};
}

json to_json(const ExponentFit& f) {
  return {{"compact", to_json(f.compact)},
          {"alpha", f.alpha},
          {"weight_m", f.weight_m ? json(*f.weight_m) : json(nullptr)},
          {"eps", numbers(f.eps)},
          {"sup_values", numbers(f.sup_values)},
          {"slope", number(f.slope)},
          {"intercept_log", number(f.intercept_log)},
          {"fit_residual", number(f.fit_residual)},
          {"classification", to_string(f.classification)},
          {"N", f.N},
          {"note", f.note}};
}

json to_json(const AsymptoticReport& r) {
  json fits = json::array();
  for (const auto& f : r.fits) fits.push_back(to_json(f));
  return {{"classification", to_string(r.classification)},
          {"N", r.N},
          {"slope", number(r.slope)},
          {"intercept_log", number(r.intercept_log)},
          {"fit_residual", number(r.fit_residual)},
          {"derivative_order", r.derivative_order},
          {"compact", to_json(r.compact)},
          {"eps", numbers(r.eps)},
          {"sup_values", numbers(r.sup_values)},
          {"tempered_weight_m", r.tempered_weight_m ? json(*r.tempered_weight_m) : json(nullptr)},
          {"fits", fits}};
}

json to_json(const PairingResult& r) {
  return {{"status", to_string(r.status)},
          {"limit", optional_number(r.limit)},
          {"limit_error", number(r.limit_error)},
          {"correction_power", optional_number(r.correction_power)},
          {"divergence_exponent", optional_number(r.divergence_exponent)},
          {"divergence_constant", optional_number(r.divergence_constant)},
          {"eps", numbers(r.eps)},
          {"values", numbers(r.values)},
          {"errors", numbers(r.errors)},
          {"note", r.note}};
}

json to_json(const AssociationResult& r) {
  json pairings = json::array();
  for (std::size_t i = 0; i < r.pairings.size(); ++i) {
    json p = to_json(r.pairings[i]);
    p["probe"] = to_json(r.probes[i]);
    pairings.push_back(p);
  }
  return {{"verdict", to_string(r.verdict)}, {"tol", number(r.tol)}, {"pairings", pairings}};
}

json to_json(const IdentityReport& r) {
  return {{"eps", numbers(r.eps)},
          {"values", numbers(r.values)},
          {"mean", number(r.mean)},
          {"stddev", number(r.stddev)},
          {"max_deviation", number(r.max_deviation)}};
}

json to_json(const SelfEnergyReport& r) {
  return {{"eps", numbers(r.eps)},
          {"energy", numbers(r.energy)},
          {"eps_times_energy", numbers(r.scaled)},
          {"max_spread", number(r.max_spread)}};
}

json to_json(const ImpossibilityReport& r) {
  return {{"x_pv_minus_one", to_json(r.x_pv_minus_one)},
          {"x_delta", to_json(r.x_delta)},
          {"triple", to_json(r.triple)},
          {"triple_constant", optional_number(r.triple_constant)},
          {"parenthesization_gap", number(r.parenthesization_gap)},
          {"samples", r.samples},
          {"x_pv_associates_one", r.x_pv_associates_one},
          {"x_delta_associates_zero", r.x_delta_associates_zero}};
}

json to_json(const MomentCheck& m) {
  return {{"n", m.n}, {"value", number(m.value)}, {"error_estimate", number(m.error_estimate)}};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw InvalidArgument("write_csv: header and column counts differ");
  for (const auto& col : columns) {
    if (col.size() != columns.front().size()) throw InvalidArgument("write_csv: columns differ in length");
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("write_csv: cannot open " + path.string());
  out << "#";
  for (const auto& h : header) out << ' ' << h;
  out << '\n' << std::setprecision(17);
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? " " : "") << columns[c].at(r);
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("write_json: cannot open " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace colombeau
