#pragma once

#include "colombeau/association.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace colombeau {

using json = nlohmann::json;

// ---------------------------------------------------------------- expressions

/**
 Expression grammar:

   {"op":"embed","dist":"delta"}               delta, heaviside, abs, sign, pv_inverse
   {"op":"embed","dist":"power_plus","r":0.5}
   {"op":"embed","dist":"polynomial","coeffs":[0,0,1]}
   {"op":"embed","dist":"smooth_test","center":0,"radius":1,"normalization":1}
   {"op":"embed","dist":"smooth","name":"sin"}   a smooth function embedded by convolution
   {"op":"smooth","name":"poly","coeffs":[0,1]}  sin, cos, exp, poly
   {"op":"residual","name":"sin"}                (f)_eps - f
   {"op":"sum","args":[...]}  {"op":"product","args":[...]}
   {"op":"scale","c":2.0,"arg":e}  {"op":"derive","order":2,"arg":e}
   {"op":"compose","outer":"exp","arg":e}      outer may carry "coeffs" for poly
 */
Expr expr_from_json(const json& j);
json to_json(const Expr& e);

json to_json(const Smooth& f);
Smooth smooth_from_json(const json& j, const char* name_key = "name");

/// Inline JSON when the text starts with '{', otherwise a path to a JSON file.
json load_json_argument(const std::string& text);

// ---------------------------------------------------------------- mollifiers

struct MollifierSpec {
  MollifierKind kind = MollifierKind::moment_gaussian;
  int q = 0;
  double plateau = 1.5;
  double cutoff = 9.0;

  Mollifier build() const;
};

/// {"type":"moment","q":4} or {"type":"ft_plateau","plateau":1.5,"cutoff":9}.
MollifierSpec mollifier_spec_from_json(const json& j);
json to_json(const MollifierSpec& s);

// ---------------------------------------------------------------- run configuration

struct LadderSpec {
  double start = 0.5;
  double ratio = 0.5;
  int rungs = 11;

  EpsLadder build() const { return EpsLadder::geometric(start, ratio, rungs); }
};

struct Tolerances {
  double quadrature = 1e-8;
  double association = 1e-6;
  double fit_residual = 0.25;
};

struct RunConfig {
  MollifierSpec mollifier;
  LadderSpec ladder;
  Interval domain{};
  std::vector<Interval> compacts{{-1.0, 1.0}};
  Tolerances tol;
  int alpha_max = 2;
  std::optional<int> weight_m;
  std::vector<TestFunction> probes = default_probes();
  std::optional<std::filesystem::path> out_dir;

  /// Tolerances positive, ladder inside (0, 1), compacts inside the domain.
  void validate() const;

  EvalOptions eval_options() const;
  ClassifyConfig classify_config() const;
  AssociationOptions association_options() const;
};

/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig run_config_from_json(const json& j);
json to_json(const RunConfig& c);

// ---------------------------------------------------------------- reports

/// Finite doubles as numbers; inf, -inf and nan as the strings "inf", "-inf", "nan".
json number(double x);
double number_from_json(const json& j);

json to_json(const Interval& k);
json to_json(const TestFunction& t);
json to_json(const ExponentFit& f);
json to_json(const AsymptoticReport& r);
json to_json(const PairingResult& r);
json to_json(const AssociationResult& r);
json to_json(const IdentityReport& r);
json to_json(const SelfEnergyReport& r);
json to_json(const ImpossibilityReport& r);
json to_json(const MomentCheck& m);

/// Whitespace-separated columns under a header line starting with '#'.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace colombeau
