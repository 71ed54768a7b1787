#include "colombeau/cli.hpp"

#include "colombeau/errors.hpp"
#include "colombeau/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

namespace colombeau {

namespace {

struct Common {
  std::string config_path;
  std::string mollifier;
  std::string out_dir;
  std::optional<double> tol;
  bool json_output = false;
};

struct Context {
  RunConfig config;
  Common common;
  std::ostream& out;
  std::ostringstream summary;
  mutable std::optional<Mollifier> built{};

  const Mollifier& mollifier() const {
    if (!built) built = config.mollifier.build();
    return *built;
  }
  Representative rep(const Expr& e) const { return Representative(e, mollifier(), config.domain, config.eval_options()); }

  std::optional<std::filesystem::path> dir() const {
    if (!common.out_dir.empty()) return std::filesystem::path(common.out_dir);
    return config.out_dir;
  }

  /// Summary or JSON on stdout; report.json, summary.txt and CSV sidecars under the output directory.
  void finish(const json& report, const std::vector<std::pair<std::string, std::vector<std::vector<double>>>>& csvs,
              const std::vector<std::string>& header) {
    if (common.json_output) {
      out << report.dump(2) << '\n';
    } else {
      out << summary.str();
    }
    const auto d = dir();
    if (!d) return;
    std::filesystem::create_directories(*d);
    write_json(*d / "report.json", report);
    std::ofstream(*d / "summary.txt") << summary.str();
    for (const auto& [name, columns] : csvs) write_csv(*d / name, header, columns);
  }
};

RunConfig load_config(const Common& c) {
  RunConfig config = c.config_path.empty() ? RunConfig{} : run_config_from_json(load_json_argument(c.config_path));
  if (!c.mollifier.empty()) config.mollifier = mollifier_spec_from_json(load_json_argument(c.mollifier));
  return config;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "RunConfig JSON file or inline JSON");
  sub->add_option("--mollifier", c.mollifier, "Mollifier spec JSON overriding the config");
  sub->add_option("--out", c.out_dir, "Directory for report.json, summary.txt and CSV data");
  sub->add_option("--tol", c.tol, "Tolerance of the command's pass/fail check")->check(CLI::PositiveNumber);
  sub->add_flag("--json", c.json_output, "Print the JSON report instead of the summary");
}

std::string fmt(double x, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

std::string fmt_opt(const std::optional<double>& x, int digits = 10) { return x ? fmt(*x, digits) : "-"; }

void describe(std::ostream& s, const PairingResult& r) {
  s << "  status " << to_string(r.status);
  if (r.limit) s << ", limit " << fmt(*r.limit, 12) << " +- " << fmt(r.limit_error, 3);
  if (r.correction_power) s << ", correction power " << fmt(*r.correction_power, 4);
  if (r.divergence_exponent) {
    s << ", divergence exponent " << fmt(*r.divergence_exponent, 6) << ", constant " << fmt(*r.divergence_constant, 8);
  }
  s << " (" << r.note << ")\n";
}

std::vector<std::vector<double>> eps_values(const PairingResult& r) { return {r.eps, r.values}; }

std::string probe_label(const TestFunction& t) {
  std::ostringstream s;
  s << "bump(center " << t.center << ", radius " << t.radius << ")";
  return s.str();
}

// ---------------------------------------------------------------- subcommands

int cmd_moments(Context& c, std::optional<int> n_max_opt) {
  const Mollifier& m = c.mollifier();
  const bool plateau = m.kind() == MollifierKind::ft_plateau;
  const int n_max = n_max_opt.value_or(plateau ? 6 : m.order() + 2);
  const double tol = c.common.tol.value_or(plateau ? 1e-5 : 1e-8);
  const auto checks = verify_moments(m, n_max);
  bool all = true;
  json rows = json::array();
  std::vector<double> ns, values;
  c.summary << "# n  value  expected  tolerance  result\n";
  for (const auto& k : checks) {
    const double expected = m.moment(k.n);
    const bool pass = std::abs(k.value - expected) <= tol;
    all = all && pass;
    json row = to_json(k);
    row["expected"] = number(expected);
    row["tolerance"] = tol;
    row["pass"] = pass;
    rows.push_back(row);
    ns.push_back(k.n);
    values.push_back(k.value);
    c.summary << k.n << "  " << fmt(k.value, 12) << "  " << fmt(expected, 12) << "  " << tol << "  "
              << (pass ? "pass" : "FAIL") << '\n';
  }
  c.finish({{"mollifier", to_json(c.config.mollifier)}, {"moments", rows}, {"all_pass", all}},
           {{"moments.csv", {ns, values}}}, {"n", "moment"});
  return all ? kExitOk : kExitNotAssociated;
}

int cmd_embed_eval(Context& c, const Expr& e, std::vector<double> eps, std::vector<double> xs, int alpha) {
  if (eps.empty()) eps = c.config.ladder.build().values();
  if (xs.empty()) {
    const Interval k = c.config.compacts.front();
    const int n = 33;
    for (int i = 0; i < n; ++i) xs.push_back(k.lo + (k.hi - k.lo) * i / (n - 1));
  }
  if (alpha < 0) throw InvalidArgument("embed-eval: alpha must be non-negative");
  const Representative rep = c.rep(e);
  std::vector<std::vector<double>> columns{xs};
  std::vector<std::string> header{"x"};
  json table = json::array();
  for (double eps_i : eps) {
    std::vector<double> col;
    for (double x : xs) col.push_back(rep.derivative(alpha, eps_i, x));
    json values = json::array();
    for (double v : col) values.push_back(number(v));
    table.push_back({{"eps", eps_i}, {"values", values}});
    header.push_back("eps=" + fmt(eps_i, 6));
    columns.push_back(std::move(col));
  }
  c.summary << "# x";
  for (double eps_i : eps) c.summary << "  eps=" << fmt(eps_i, 6);
  c.summary << '\n';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    c.summary << fmt(xs[i], 6);
    for (std::size_t j = 1; j < columns.size(); ++j) c.summary << "  " << fmt(columns[j][i], 12);
    c.summary << '\n';
  }
  json report{{"expr", to_json(e)}, {"alpha", alpha}, {"x", xs}, {"table", table},
              {"mollifier", to_json(c.config.mollifier)}};
  c.finish(report, {{"embed.csv", columns}}, header);
  return kExitOk;
}

int cmd_classify(Context& c, const Expr& e) {
  const auto report = classify(e, c.mollifier(), c.config.classify_config());
  c.summary << "expression      " << to_string(e) << '\n'
            << "classification  " << to_string(report.classification) << '\n'
            << "slope           " << fmt(report.slope, 6) << " (alpha " << report.derivative_order << ")\n"
            << "N               " << report.N << '\n'
            << "fit residual    " << fmt(report.fit_residual, 3) << '\n';
  for (const auto& f : report.fits) {
    c.summary << "  K=[" << f.compact.lo << ", " << f.compact.hi << "] alpha " << f.alpha << ": "
              << to_string(f.classification) << ", slope " << fmt(f.slope, 6) << ", residual " << fmt(f.fit_residual, 3)
              << (f.note.empty() ? "" : " (" + f.note + ")") << '\n';
  }
  json j = to_json(report);
  j["expr"] = to_json(e);
  j["mollifier"] = to_json(c.config.mollifier);
  c.finish(j, {{"sups.csv", {report.eps, report.sup_values}}}, {"eps", "sup"});
  switch (report.classification) {
    case Classification::moderate:
    case Classification::negligible: return kExitOk;
    case Classification::non_moderate: return kExitNonModerate;
    case Classification::indeterminate: return kExitIndeterminate;
  }
  return kExitIndeterminate;
}

int cmd_pair(Context& c, const Expr& e) {
  const Representative rep = c.rep(e);
  const auto results = shadow_report(rep, c.config.probes, c.config.ladder.build());
  json list = json::array();
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> csvs;
  bool unknown = false;
  c.summary << "expression " << to_string(e) << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    json p = to_json(results[i]);
    p["probe"] = to_json(c.config.probes[i]);
    list.push_back(p);
    csvs.push_back({"pair_" + std::to_string(i) + ".csv", eps_values(results[i])});
    unknown = unknown || results[i].status == PairingStatus::indeterminate;
    c.summary << probe_label(c.config.probes[i]) << '\n';
    describe(c.summary, results[i]);
  }
  c.finish({{"expr", to_json(e)}, {"mollifier", to_json(c.config.mollifier)}, {"pairings", list}}, csvs,
           {"eps", "pairing"});
  return unknown ? kExitIndeterminate : kExitOk;
}

int cmd_associate(Context& c, const Expr& g, const Expr& h) {
  auto opts = c.config.association_options();
  if (c.common.tol) opts.tol = *c.common.tol;
  const auto r = associated(c.rep(g), c.rep(h), opts);
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> csvs;
  c.summary << to_string(g) << "  vs  " << to_string(h) << ": " << to_string(r.verdict) << " (tol " << r.tol << ")\n";
  for (std::size_t i = 0; i < r.pairings.size(); ++i) {
    csvs.push_back({"pair_" + std::to_string(i) + ".csv", eps_values(r.pairings[i])});
    c.summary << probe_label(r.probes[i]) << '\n';
    describe(c.summary, r.pairings[i]);
  }
  json j = to_json(r);
  j["g"] = to_json(g);
  j["h"] = to_json(h);
  j["mollifier"] = to_json(c.config.mollifier);
  c.finish(j, csvs, {"eps", "pairing_of_difference"});
  switch (r.verdict) {
    case Association::associated: return kExitOk;
    case Association::not_associated: return kExitNotAssociated;
    case Association::indeterminate: return kExitIndeterminate;
  }
  return kExitIndeterminate;
}

int cmd_shadow(Context& c, const Expr& e, const std::vector<std::string>& candidates_json) {
  std::vector<std::pair<std::string, Dist>> candidates{{"delta", Dist::delta()}, {"heaviside", Dist::heaviside()}};
  for (const auto& text : candidates_json) {
    const Expr ce = expr_from_json(load_json_argument(text));
    const auto* node = std::get_if<EmbedNode>(&ce.node().v);
    if (!node) throw ParseError("shadow: a candidate must be a single embed expression");
    candidates.push_back({to_string(node->dist), node->dist});
  }
  const auto results = shadow_report(c.rep(e), c.config.probes, c.config.ladder.build());
  json list = json::array();
  std::vector<std::pair<std::string, std::vector<std::vector<double>>>> csvs;
  bool unknown = false;
  c.summary << "expression " << to_string(e) << '\n';
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& T = c.config.probes[i];
    json p = to_json(results[i]);
    p["probe"] = to_json(T);
    json cand = json::object();
    c.summary << probe_label(T) << '\n';
    describe(c.summary, results[i]);
    for (const auto& [name, d] : candidates) {
      const double v = classical_pairing(d, T);
      cand[name] = number(v);
      c.summary << "    " << name << ": " << fmt(v, 12);
      if (results[i].limit) c.summary << "  (difference " << fmt(*results[i].limit - v, 3) << ")";
      c.summary << '\n';
    }
    p["candidates"] = cand;
    list.push_back(p);
    csvs.push_back({"shadow_" + std::to_string(i) + ".csv", eps_values(results[i])});
    unknown = unknown || results[i].status == PairingStatus::indeterminate;
  }
  c.finish({{"expr", to_json(e)}, {"mollifier", to_json(c.config.mollifier)}, {"pairings", list}}, csvs,
           {"eps", "pairing"});
  return unknown ? kExitIndeterminate : kExitOk;
}

int cmd_self_energy(Context& c, double charge) {
  const Mollifier& m = c.mollifier();
  const double tol = c.common.tol.value_or(1e-10);
  const auto r = self_energy_scan(m, c.config.ladder.build(), charge);
  c.summary << "# eps  U(eps)  eps*U(eps)\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    c.summary << fmt(r.eps[i], 6) << "  " << fmt(r.energy[i], 14) << "  " << fmt(r.scaled[i], 14) << '\n';
  }
  c.summary << "max spread of eps*U: " << fmt(r.max_spread, 3) << " (tol " << tol << ")\n";
  json j = to_json(r);
  j["charge"] = charge;
  j["mollifier"] = to_json(c.config.mollifier);
  if (m.kind() == MollifierKind::moment_gaussian && m.order() == 0) {
    const double closed = 0.5 * charge * charge / std::sqrt(2.0 * std::numbers::pi);
    j["closed_form"] = closed;
    c.summary << "closed form (e^2/2) / sqrt(2 pi): " << fmt(closed, 14) << '\n';
  }
  c.finish(j, {{"self_energy.csv", {r.eps, r.scaled}}}, {"eps", "eps_times_U"});
  return r.max_spread <= tol ? kExitOk : kExitNotAssociated;
}

int cmd_impossibility(Context& c) {
  auto opts = c.config.association_options();
  if (c.common.tol) opts.tol = *c.common.tol;
  const TestFunction T{0.0, 1.0, 1.0};
  const auto r = impossibility_demo(c.mollifier(), T, c.config.ladder.build(), opts);
  c.summary << "x * pv(1/x) - 1 against T:\n";
  describe(c.summary, r.x_pv_minus_one);
  c.summary << "x * delta against T:\n";
  describe(c.summary, r.x_delta);
  c.summary << "x * pv(1/x) * delta against T:\n";
  describe(c.summary, r.triple);
  c.summary << "triple-product limit / T(0): " << fmt_opt(r.triple_constant, 12) << '\n'
            << "x pv(1/x) associated with 1: " << (r.x_pv_associates_one ? "yes" : "no") << '\n'
            << "x delta associated with 0:   " << (r.x_delta_associates_zero ? "yes" : "no") << '\n'
            << "largest relative gap between (x pv) delta and x (pv delta): " << fmt(r.parenthesization_gap, 3)
            << " over " << r.samples << " samples\n";
  json j = to_json(r);
  j["mollifier"] = to_json(c.config.mollifier);
  j["probe"] = to_json(T);
  c.finish(j,
           {{"x_pv_minus_one.csv", eps_values(r.x_pv_minus_one)},
            {"x_delta.csv", eps_values(r.x_delta)},
            {"triple.csv", eps_values(r.triple)}},
           {"eps", "pairing"});
  const bool ok = r.x_pv_associates_one && r.x_delta_associates_zero && r.parenthesization_gap <= 1e-12;
  return ok ? kExitOk : kExitNotAssociated;
}

int cmd_h2h(Context& c) {
  const double tol = c.common.tol.value_or(1e-8);
  const auto r = exact_identity_check_H2H(c.mollifier(), c.config.ladder.build());
  c.summary << "# eps  integral of (H^2 - H) H'  deviation from -1/6\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    c.summary << fmt(r.eps[i], 6) << "  " << fmt(r.values[i], 15) << "  " << fmt(r.values[i] + 1.0 / 6.0, 3) << '\n';
  }
  c.summary << "max deviation " << fmt(r.max_deviation, 3) << ", stddev across eps " << fmt(r.stddev, 3) << " (tol "
            << tol << ")\n";
  json j = to_json(r);
  j["mollifier"] = to_json(c.config.mollifier);
  j["expected"] = -1.0 / 6.0;
  c.finish(j, {{"h2h.csv", {r.eps, r.values}}}, {"eps", "integral"});
  return r.max_deviation <= tol && r.stddev <= tol ? kExitOk : kExitNotAssociated;
}

int cmd_delta_square(Context& c) {
  const Mollifier& m = c.mollifier();
  const TestFunction T{0.0, 1.0, 1.0};
  const Expr d = embed(Dist::delta());
  const auto r = pair(c.rep(product({d, d})), T, c.config.ladder.build());
  const double R = std::min(m.truncation_radius(1e-16), m.grid_limit());
  const double eta_sq = integrate([&m](double z) { return m(z) * m(z); }, -R, R, QuadOptions{1e-15, 1e-13, 4000}).value;
  const double predicted = T(0.0) * eta_sq;
  c.summary << "# eps  pairing of delta^2 with T  eps * pairing\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    c.summary << fmt(r.eps[i], 6) << "  " << fmt(r.values[i], 12) << "  " << fmt(r.eps[i] * r.values[i], 12) << '\n';
  }
  describe(c.summary, r);
  c.summary << "T(0) * integral of eta^2: " << fmt(predicted, 12) << '\n';
  json j = to_json(r);
  j["mollifier"] = to_json(c.config.mollifier);
  j["predicted_constant"] = predicted;
  c.finish(j, {{"delta_square.csv", eps_values(r)}}, {"eps", "pairing"});
  const double tol = c.common.tol.value_or(0.05);
  const bool ok = r.status == PairingStatus::divergent && std::abs(*r.divergence_exponent - 1.0) <= tol;
  return ok ? kExitOk : kExitNotAssociated;
}

Expr parse_expr(const std::string& text) {
  if (text.empty()) throw ParseError("--expr is required");
  return expr_from_json(load_json_argument(text));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mollified embeddings of distributions: moments, asymptotic classification and association", "colombeau"};
  app.require_subcommand(1);

  Common common;
  std::string expr_text, with_text, demo_name;
  std::optional<int> n_max;
  std::vector<double> eps_list, x_list;
  std::vector<std::string> candidates;
  int alpha = 0;
  double charge = 1.0;

  auto* moments = app.add_subcommand("moments", "Verify the moments of the mollifier");
  moments->add_option("--n-max", n_max, "Highest moment order")->check(CLI::NonNegativeNumber);
  auto* embed_eval = app.add_subcommand("embed-eval", "Evaluate D^alpha g_eps on a grid");
  embed_eval->add_option("--eps", eps_list, "eps values (default: the ladder)");
  embed_eval->add_option("--x", x_list, "x values (default: 33 points on the first compact)");
  embed_eval->add_option("--alpha", alpha, "Derivative order");
  auto* classify_cmd = app.add_subcommand("classify", "Classify an expression as moderate, negligible or neither");
  auto* pair_cmd = app.add_subcommand("pair", "Pair an expression with the probe set and extrapolate");
  auto* associate_cmd = app.add_subcommand("associate", "Decide whether two expressions are associated");
  associate_cmd->add_option("--with", with_text, "Second expression (JSON file or inline)")->required();
  auto* shadow_cmd = app.add_subcommand("shadow", "Compare pairings with candidate distributions");
  shadow_cmd->add_option("--candidate", candidates, "Extra candidate embed expression (JSON)");
  auto* self_energy_cmd = app.add_subcommand("self-energy", "eps * U(eps) along the ladder");
  self_energy_cmd->add_option("--charge", charge, "Charge e");
  auto* impossibility_cmd = app.add_subcommand("demo-impossibility", "x * pv(1/x) * delta in the algebra");
  auto* demo = app.add_subcommand("demo", "Named demonstrations");
  demo->add_option("name", demo_name, "impossibility, self-energy, h2h or delta-square")->required();

  for (auto* sub : {moments, embed_eval, classify_cmd, pair_cmd, associate_cmd, shadow_cmd, self_energy_cmd,
                    impossibility_cmd, demo}) {
    add_common(sub, common);
  }
  for (auto* sub : {embed_eval, classify_cmd, pair_cmd, associate_cmd, shadow_cmd}) {
    sub->add_option("--expr", expr_text, "Expression (JSON file or inline)")->required();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }

  try {
    Context c{load_config(common), common, out, {}, {}};
    if (*moments) return cmd_moments(c, n_max);
    if (*embed_eval) return cmd_embed_eval(c, parse_expr(expr_text), eps_list, x_list, alpha);
    if (*classify_cmd) return cmd_classify(c, parse_expr(expr_text));
    if (*pair_cmd) return cmd_pair(c, parse_expr(expr_text));
    if (*associate_cmd) return cmd_associate(c, parse_expr(expr_text), parse_expr(with_text));
    if (*shadow_cmd) return cmd_shadow(c, parse_expr(expr_text), candidates);
    if (*self_energy_cmd) return cmd_self_energy(c, charge);
    if (*impossibility_cmd) return cmd_impossibility(c);
    if (*demo) {
      if (demo_name == "impossibility") return cmd_impossibility(c);
      if (demo_name == "self-energy") return cmd_self_energy(c, charge);
      if (demo_name == "h2h") return cmd_h2h(c);
      if (demo_name == "delta-square") return cmd_delta_square(c);
      err << "error: unknown demo \"" << demo_name << "\" (impossibility, self-energy, h2h, delta-square)\n";
      return kExitUsage;
    }
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const NumericalFailure& ex) {
    err << "numerical failure: " << ex.what() << '\n';
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace colombeau
