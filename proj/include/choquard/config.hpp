#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "choquard/solver.hpp"

namespace choquard {

/// Nonlinearity as it appears in a config or solution file.
///   homogeneous: F = k_F t^r (convention selects k_F, k_f)
///   two_power:   F = t^r + c2 t^r2, f = r t^{r-1} + c2 r2 t^{r2-1}, r < r2
/// For two_power on (0, delta): C_bar = r + c2 r2 delta^{r2-r}, C_under = r, limit r.
struct NonlinearityConfig {
  std::string kind = "homogeneous";
  std::string convention = "power";
  double r = 1.7;
  double r2 = 1.8;
  double c2 = 1.0;
  double delta = 1.0;

  NonlinearitySpec build() const;
};

struct ProblemConfig {
  int N = 3;
  double s = 0.5;
  double alpha = 2.0;
  double mu = 1.0;
  NonlinearityConfig nonlinearity;

  ProblemParams params() const;
};

struct AnalysisConfig {
  double fit_lo = 50.0;
  double fit_hi = 100.0;
  bool fit_log = false;
  std::optional<double> theta;             // Riesz tail weight, default N + alpha
  std::optional<double> chain_rule_theta;  // default 2 - r
  std::vector<double> chain_rule_radii{0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  std::string kappa = "star";  // star | none | a positive number
  double riesz_lo = 20.0;
  double riesz_hi = 100.0;
  double bound_lo = 70.0;
  double bound_hi = 100.0;

  double exponent_tol = 0.10;
  double constant_tol = 0.20;
  double riesz_tol = 0.05;
  double pohozaev_tol = 1e-2;
  double dilation_tol = 0.05;
  double chain_rule_tol = 1e-6;
  double residual_tol = 1e-6;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::uint64_t seed = 0;

  bool wants(const std::string& fmt) const;
};

/// specfun-table: profile exponent and radii (N and s come from [problem]).
struct TableConfig {
  double beta = 2.0;
  std::vector<double> radii{1.0, 10.0, 100.0};
};

struct OracleCase {
  int N = 3;
  double s = 0.5;
  double beta = 2.0;
};

struct OracleConfig {
  std::vector<OracleCase> cases{{3, 0.5, 2.0}, {3, 0.5, 3.5}, {2, 0.5, 2.5}, {3, 0.25, 3.0}};
  double r_lo = 0.1;
  double r_hi = 50.0;
  double tolerance = 1e-3;
};

struct RunConfig {
  ProblemConfig problem;
  GridSpec grid;
  SolverOpts solver;  // solver.grid mirrors `grid`
  AnalysisConfig analysis;
  OutputConfig output;
  TableConfig table;
  OracleConfig oracle;

  SolverOpts solver_opts() const;

  /// Field-level checks; throws ConfigError naming the offending key.
  void validate() const;
};

/// One settable key, "section.key".
struct ConfigField {
  std::string section;
  std::string key;
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;

  std::string name() const { return section + "." + key; }
};

const std::vector<ConfigField>& config_fields();

/// Sets "section.key" from text; unknown keys and bad values throw ConfigError.
void set_config_value(RunConfig& cfg, const std::string& name, const std::string& value);

/// INI-style text: [section] headers, key = value, '#' or ';' comments.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Round-trippable dump of every field.
std::string dump_config(const RunConfig& cfg);

/// Real numbers, also "p/q" fractions such as 5/3.
double parse_real(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace choquard
