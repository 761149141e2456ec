#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "choquard/config.hpp"
#include "choquard/io.hpp"
#include "choquard/solver.hpp"

namespace choquard {

/// radius, h_beta, fraclap_exact, fraclap_asymptotic, ratio (exact / asymptotic model).
Table specfun_table(int N, double s, double beta, const std::vector<double>& radii);

struct OracleResult {
  OracleCase params;
  double max_rel_error = 0.0;
  double worst_radius = 0.0;
  int points = 0;
  bool pass = false;
};

/// Discrete (-Delta)^s h_beta against the hypergeometric closed form at the
/// grid nodes inside [r_lo, r_hi], one grid per case.
std::vector<OracleResult> run_oracle(const OracleConfig& oc, const GridSpec& grid);
Table oracle_table(const std::vector<OracleResult>& results);

/// r, u, u*r^beta.
Table solution_table(const Solution& sol, double beta);

struct Check {
  std::string name;
  std::string status;  // pass, fail or skip
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct DecayReport {
  std::vector<Check> checks;
  nlohmann::json data;

  bool passed() const;
  const Check& check(const std::string& name) const;
  Table table() const;
  nlohmann::json json() const;
};

/// Tail fit, sharp constant, bound constants, Riesz tail, chain rule and the
/// Pohozaev diagnostics of one solution, each with a pass/fail verdict.
DecayReport verify_decay_report(const Solution& sol, const AnalysisConfig& a);

}  // namespace choquard
