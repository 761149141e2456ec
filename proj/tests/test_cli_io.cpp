#include <filesystem>
#include <sstream>

#include "doctest.h"

#include "choquard/cli.hpp"
#include "choquard/config.hpp"
#include "choquard/error.hpp"
#include "choquard/io.hpp"
#include "choquard/report.hpp"

using namespace choquard;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("choquard_cli_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "choquard");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str() + err.str();
  return code;
}

// Small grid to keep the end-to-end runs short.
const std::vector<std::string> kCoarse{"--grid.nodes", "400", "--grid.r_min", "1e-2"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("number formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(2.0) == "2");
  CHECK(format_real(NAN) == "nan");
  CHECK(format_real(-INFINITY) == "-inf");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("fractions and lists") {
  CHECK(parse_real("5/3") == 5.0 / 3.0);
  CHECK(parse_real(" 1e-3 ") == 1e-3);
  CHECK(parse_real_list("1, 10,100") == std::vector<double>{1, 10, 100});
  CHECK(parse_real_list("").empty());
  CHECK_THROWS_AS(parse_real("abc"), ConfigError);
  CHECK_THROWS_AS(parse_real("1/0"), ConfigError);
}

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(
      "# comment\n[problem]\nr = 5/3\nconvention = sqrt_r\n\n[grid]\nnodes = 800 # inline\n"
      "[analysis]\nfit_window = 40, 90\nkappa = 2.5\n[oracle]\ncases = 3 0.5 2; 2 0.5 2.5\n");
  CHECK(c.problem.nonlinearity.r == 5.0 / 3.0);
  CHECK(c.problem.nonlinearity.convention == "sqrt_r");
  CHECK(c.grid.nodes == 800);
  CHECK(c.analysis.fit_lo == 40.0);
  CHECK(c.analysis.fit_hi == 90.0);
  CHECK(c.analysis.kappa == "2.5");
  CHECK(c.oracle.cases.size() == 2);
  CHECK(c.oracle.cases[1].N == 2);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown keys and malformed lines are errors") {
  CHECK_THROWS_AS(parse_config("[problem]\nrr = 1.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[physics]\nr = 1.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("r = 1.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[problem]\nr 1.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nnodes = 1.5\n"), ConfigError);
  try {
    parse_config("[solver]\n\ntolerence = 1e-9\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("solver.tolerence") != std::string::npos);
  }
}

TEST_CASE("field-level validation") {
  auto expect = [](const std::string& key, const std::string& value, const std::string& field) {
    RunConfig c;
    set_config_value(c, key, value);
    try {
      c.validate();
      FAIL("expected a ConfigError for " << key);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  expect("problem.r", "1.5", "problem");
  expect("grid.nodes", "10", "grid.nodes");
  expect("solver.damping", "1.5", "solver.damping");
  expect("analysis.fit_window", "50, 200", "analysis.fit_window");
  expect("output.formats", "xml", "output.formats");
  expect("analysis.chain_rule_theta", "1.2", "analysis.chain_rule_theta");
  expect("problem.nonlinearity", "cubic", "problem.nonlinearity");
}

TEST_CASE("config dump round trip") {
  RunConfig c;
  set_config_value(c, "problem.r", "5/3");
  set_config_value(c, "analysis.theta", "4.5");
  set_config_value(c, "table.radii", "");
  const std::string text = dump_config(c);
  const RunConfig d = parse_config(text);
  CHECK(dump_config(d) == text);
  CHECK(d.problem.nonlinearity.r == 5.0 / 3.0);
  CHECK(d.analysis.theta.value() == 4.5);
  CHECK(d.table.radii.empty());
}

TEST_CASE("csv dialect") {
  Table t{{"a", "b"}, {}};
  t.add_reals({1.0, 0.5});
  t.add({"x", "2"});
  CHECK(to_csv(t) == "a,b\n1,0.5\nx,2\n");
  const auto j = to_json(t);
  CHECK(j[0]["b"].get<double>() == 0.5);
  CHECK(j[1]["a"].get<std::string>() == "x");
  CHECK_THROWS(t.add({"only one"}));
}

TEST_CASE("solution file round trip is bitwise") {
  RunConfig c;
  set_config_value(c, "grid.nodes", "300");
  set_config_value(c, "grid.r_min", "1e-2");
  set_config_value(c, "problem.r", "1.9");
  const Solution sol = solve_ground_state(c.problem.params(), c.solver_opts());
  const auto dir = scratch("roundtrip");
  write_json((dir / "s.json").string(), solution_to_json(sol, c.problem.nonlinearity, c.grid));
  const auto back = load_solution((dir / "s.json").string());
  CHECK(back.solution.u.values() == sol.u.values());
  CHECK(back.solution.u.g().nodes == sol.u.g().nodes);
  CHECK(back.solution.u.tail().exponent == sol.u.tail().exponent);
  CHECK(back.solution.u.tail().amplitude == sol.u.tail().amplitude);
  CHECK(back.solution.mass_F == sol.mass_F);
  CHECK(back.solution.norm_r == sol.norm_r);
  CHECK(back.solution.trace == sol.trace);
  CHECK(back.nonlinearity.r == 1.9);

  auto j = solution_to_json(sol, c.problem.nonlinearity, c.grid);
  j["grid"]["r"][5] = 1.0;
  CHECK_THROWS_AS(solution_from_json(j), ConfigError);
  j = solution_to_json(sol, c.problem.nonlinearity, c.grid);
  j["schema"] = "other";
  CHECK_THROWS_AS(solution_from_json(j), ConfigError);
}

TEST_CASE("specfun-table command") {
  const auto dir = scratch("table");
  CHECK(cli({"specfun-table", "--out", dir.string(), "--table.beta", "2", "--table.radii",
             "1,10,100"}) == kExitPass);
  const auto rows = read_json((dir / "specfun_table.json").string());
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(std::abs(row["ratio"].get<double>() - 1.0) <= 1e-9);
  CHECK(read_text((dir / "specfun_table.csv").string()).rfind(
            "radius,h_beta,fraclap_exact,fraclap_asymptotic,ratio\n", 0) == 0);

  CHECK(cli({"specfun-table", "--out", dir.string(), "--table.beta", "3", "--table.radii", "100",
             "--format", "json"}) == kExitPass);
  const auto log_row = read_json((dir / "specfun_table.json").string());
  CHECK(std::abs(log_row[0]["ratio"].get<double>() - 1.0) <= 0.10);

  const auto empty = scratch("table_empty");
  CHECK(cli({"specfun-table", "--out", empty.string(), "--table.radii", ""}) == kExitPass);
  CHECK(read_text((empty / "specfun_table.csv").string()) ==
        "radius,h_beta,fraclap_exact,fraclap_asymptotic,ratio\n");
}

TEST_CASE("oracle command") {
  const auto dir = scratch("oracle");
  CHECK(cli({"oracle", "--out", dir.string()}) == kExitPass);
  const auto rep = read_json((dir / "oracle.json").string());
  CHECK(rep["pass"].get<bool>());
  for (const auto& c : rep["cases"]) CHECK(c["max_rel_error"].get<double>() <= 1e-3);

  CHECK(cli({"oracle", "--out", dir.string(), "--grid.nodes", "50"}) == kExitCheckFailed);
  CHECK(cli({"oracle", "--out", dir.string(), "--oracle.cases", "3 0.5 2"}) == kExitPass);
}

TEST_CASE("exit codes for configuration and numerical failures") {
  const auto dir = scratch("codes");
  CHECK(cli({"solve", "--out", dir.string(), "--problem.nope", "1"}) == kExitConfigError);
  CHECK(cli({"solve", "--out", dir.string(), "--problem.r", "abc"}) == kExitConfigError);
  CHECK(cli({"solve", "--out", dir.string(), "--problem.r", "1.5"}) == kExitConfigError);
  CHECK(cli({"solve", "--config", (dir / "missing.ini").string()}) == kExitConfigError);
  CHECK(cli({"frobnicate"}) == kExitConfigError);
  CHECK(cli({"solve", "--out", dir.string(), "--solver.max_iter", "2"}) == kExitNumerical);
  CHECK(cli({"solve", "--help"}) == kExitPass);
}

TEST_CASE("config file and overrides") {
  const auto dir = scratch("cfgfile");
  write_text((dir / "run.ini").string(),
             "[table]\nbeta = 2\nradii = 1, 2\n[output]\nformats = csv\n");
  CHECK(cli({"specfun-table", "--config", (dir / "run.ini").string(), "--out", dir.string(),
             "--table.radii", "5"}) == kExitPass);
  CHECK(fs::exists(dir / "specfun_table.csv"));
  CHECK_FALSE(fs::exists(dir / "specfun_table.json"));
  CHECK(read_text((dir / "specfun_table.csv").string()).find("\n5,") != std::string::npos);
}

TEST_CASE("verify-decay from a file reproduces the in-process report") {
  const auto a = scratch("inproc");
  const auto b = scratch("fromfile");
  const std::vector<std::string> prob{"--problem.r", "1.9", "--problem.convention", "sqrt_r"};
  const int in_proc = cli(with(with({"verify-decay", "--out", a.string()}, prob), kCoarse));
  CHECK(cli(with(with({"solve", "--out", b.string()}, prob), kCoarse)) == kExitPass);
  const int from_file = cli(with({"verify-decay", "--out", b.string(), "--solution",
                                  (b / "solution.json").string()},
                                 kCoarse));
  CHECK(in_proc == from_file);
  CHECK(in_proc != kExitNumerical);
  CHECK(read_text((a / "decay_report.csv").string()) ==
        read_text((b / "decay_report.csv").string()));
  CHECK(read_text((a / "decay_report.json").string()) ==
        read_text((b / "decay_report.json").string()));
}

TEST_CASE("identical configs give byte-identical tables") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::vector<std::string> prob{"--problem.r", "1.9", "--output.seed", "7"};
  CHECK(cli(with(with({"solve", "--out", a.string()}, prob), kCoarse)) == kExitPass);
  CHECK(cli(with(with({"solve", "--out", b.string()}, prob), kCoarse)) == kExitPass);
  CHECK(read_text((a / "solution_table.csv").string()) ==
        read_text((b / "solution_table.csv").string()));
  CHECK(read_text((a / "solution.json").string()) == read_text((b / "solution.json").string()));
}

}  // TEST_SUITE
