#include "choquard/cli.hpp"

#include <filesystem>
#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "choquard/config.hpp"
#include "choquard/decay.hpp"
#include "choquard/error.hpp"
#include "choquard/io.hpp"
#include "choquard/report.hpp"

namespace choquard {

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> formats;
  std::map<std::string, std::string> overrides;
  std::map<std::string, CLI::Option*> override_opts;
};

void add_common(CLI::App* sub, CommonArgs& c) {
  sub->add_option("--config", c.config_path, "configuration file");
  sub->add_option("--out", c.out_dir, "output directory (output.directory)");
  sub->add_option("--format", c.formats, "csv and/or json (output.formats)")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json"}));
  for (const auto& f : config_fields()) {
    c.override_opts[f.name()] =
        sub->add_option("--" + f.name(), c.overrides[f.name()], f.help)->group("Overrides");
  }
}

RunConfig resolve(const CommonArgs& c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig{} : load_config(c.config_path);
  for (const auto& f : config_fields()) {
    const auto* opt = c.override_opts.at(f.name());
    if (opt->count() > 0) set_config_value(cfg, f.name(), c.overrides.at(f.name()));
  }
  if (!c.out_dir.empty()) cfg.output.directory = c.out_dir;
  if (!c.formats.empty()) cfg.output.formats = c.formats;
  cfg.validate();
  return cfg;
}

std::string prepare_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.output.directory);
  return cfg.output.directory;
}

void emit_table(const RunConfig& cfg, const std::string& stem, const Table& t) {
  const std::string dir = prepare_dir(cfg);
  if (cfg.output.wants("csv")) write_text(dir + "/" + stem + ".csv", to_csv(t));
  if (cfg.output.wants("json")) write_json(dir + "/" + stem + ".json", to_json(t));
}

int cmd_specfun_table(const RunConfig& cfg, std::ostream& out) {
  const Table t = specfun_table(cfg.problem.N, cfg.problem.s, cfg.table.beta, cfg.table.radii);
  emit_table(cfg, "specfun_table", t);
  out << "specfun-table: " << t.rows.size() << " rows -> " << cfg.output.directory << "\n";
  return kExitPass;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  const auto results = run_oracle(cfg.oracle, cfg.grid);
  const Table t = oracle_table(results);
  const std::string dir = prepare_dir(cfg);
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.pass;
    out << "oracle N=" << r.params.N << " s=" << format_real(r.params.s)
        << " beta=" << format_real(r.params.beta) << " max_rel_error=" << format_real(r.max_rel_error)
        << (r.pass ? " pass" : " FAIL") << "\n";
  }
  if (cfg.output.wants("csv")) write_text(dir + "/oracle.csv", to_csv(t));
  if (cfg.output.wants("json")) {
    nlohmann::json j = {{"tolerance", cfg.oracle.tolerance}, {"cases", to_json(t)}, {"pass", ok}};
    write_json(dir + "/oracle.json", j);
  }
  return ok ? kExitPass : kExitCheckFailed;
}

Solution run_solve(const RunConfig& cfg, std::ostream& out) {
  Solution sol = solve_ground_state(cfg.problem.params(), cfg.solver_opts());
  out << "solve: converged in " << sol.iterations << " iterations, residual "
      << format_real(sol.residual_sup) << ", pohozaev defect " << format_real(sol.pohozaev_defect)
      << "\n";
  return sol;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Solution sol = run_solve(cfg, out);
  double beta = tail_fixed_point(sol.params);
  try {
    const DecayPrediction pred = predict_decay(sol.params);
    beta = pred.beta;
    out << "beta = " << format_real(pred.beta) << ", regime " << to_string(pred.regime) << "\n";
  } catch (const DomainError&) {
    out << "no decay prediction outside [(N+alpha)/N, 2); table uses beta = "
        << format_real(beta) << "\n";
  }
  const std::string dir = prepare_dir(cfg);
  write_json(dir + "/solution.json", solution_to_json(sol, cfg.problem.nonlinearity, cfg.grid));
  emit_table(cfg, "solution_table", solution_table(sol, beta));
  return kExitPass;
}

int cmd_verify(const RunConfig& cfg, const std::string& solution_path, std::ostream& out) {
  std::optional<Solution> sol;
  if (!solution_path.empty()) {
    sol = load_solution(solution_path).solution;
  } else {
    sol = run_solve(cfg, out);
  }
  const DecayReport rep = verify_decay_report(*sol, cfg.analysis);
  const std::string dir = prepare_dir(cfg);
  if (cfg.output.wants("csv")) write_text(dir + "/decay_report.csv", to_csv(rep.table()));
  if (cfg.output.wants("json")) write_json(dir + "/decay_report.json", rep.json());
  out << "beta = " << format_real(rep.data["prediction"]["beta"].get<double>()) << ", regime "
      << rep.data["prediction"]["regime"].get<std::string>() << "\n";
  for (const auto& c : rep.checks)
    out << "  " << c.status << "  " << c.name << "  measured " << format_real(c.measured)
        << "  limit " << format_real(c.limit) << "\n";
  out << (rep.passed() ? "verify-decay: pass" : "verify-decay: FAIL") << "\n";
  return rep.passed() ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial ground states of the fractional Choquard equation and their decay"};
  app.require_subcommand(1, 1);

  CommonArgs table_args, oracle_args, solve_args, verify_args;
  std::string solution_path;
  auto* table = app.add_subcommand("specfun-table", "closed form vs asymptotic law of (-Delta)^s h_beta");
  auto* oracle = app.add_subcommand("oracle", "discrete operator against closed forms");
  auto* solve = app.add_subcommand("solve", "compute a ground state");
  auto* verify = app.add_subcommand("verify-decay", "decay checks on a solution");
  add_common(table, table_args);
  add_common(oracle, oracle_args);
  add_common(solve, solve_args);
  add_common(verify, verify_args);
  verify->add_option("--solution", solution_path, "solution.json written by solve");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (*table) return cmd_specfun_table(resolve(table_args), out);
    if (*oracle) return cmd_oracle(resolve(oracle_args), out);
    if (*solve) return cmd_solve(resolve(solve_args), out);
    if (*verify) return cmd_verify(resolve(verify_args), solution_path, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfigError;
}

}  // namespace choquard
