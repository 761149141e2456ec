#include "choquard/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "choquard/error.hpp"
#include "choquard/io.hpp"

namespace choquard {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_plain(const std::string& t) {
  double v = 0.0;
  const char* b = t.data();
  const char* e = b + t.size();
  if (!t.empty() && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || t.empty())
    throw ConfigError("not a number: '" + t + "'");
  return v;
}

int parse_int(const std::string& t) {
  int v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty())
    throw ConfigError("not an integer: '" + t + "'");
  return v;
}

bool parse_bool(const std::string& t) {
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("not a boolean: '" + t + "'");
}

std::string join_reals(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_real(v[i]);
  return out;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : "auto"; }

std::optional<double> parse_opt_real(const std::string& t) {
  if (t == "auto" || t.empty()) return std::nullopt;
  return parse_real(t);
}


template <class T>
ConfigField real_field(std::string sec, std::string key, std::string help,
                       T RunConfig::*part, double T::*member) {
  return {sec, key, help,
          [=](RunConfig& c, const std::string& v) { (c.*part).*member = parse_real(v); },
          [=](const RunConfig& c) { return format_real((c.*part).*member); }};
}

template <class T>
ConfigField int_field(std::string sec, std::string key, std::string help, T RunConfig::*part,
                      int T::*member) {
  return {sec, key, help,
          [=](RunConfig& c, const std::string& v) { (c.*part).*member = parse_int(v); },
          [=](const RunConfig& c) { return std::to_string((c.*part).*member); }};
}

template <class T>
ConfigField string_field(std::string sec, std::string key, std::string help, T RunConfig::*part,
                         std::string T::*member) {
  return {sec, key, help, [=](RunConfig& c, const std::string& v) { (c.*part).*member = v; },
          [=](const RunConfig& c) { return (c.*part).*member; }};
}

ConfigField nl_real(std::string key, std::string help, double NonlinearityConfig::*member) {
  return {"problem", key, help,
          [=](RunConfig& c, const std::string& v) {
            c.problem.nonlinearity.*member = parse_real(v);
          },
          [=](const RunConfig& c) { return format_real(c.problem.nonlinearity.*member); }};
}

ConfigField nl_string(std::string key, std::string help, std::string NonlinearityConfig::*member) {
  return {"problem", key, help,
          [=](RunConfig& c, const std::string& v) { c.problem.nonlinearity.*member = v; },
          [=](const RunConfig& c) { return c.problem.nonlinearity.*member; }};
}

std::vector<ConfigField> make_fields() {
  using A = AnalysisConfig;
  std::vector<ConfigField> f;
  f.push_back(int_field("problem", "N", "dimension", &RunConfig::problem, &ProblemConfig::N));
  f.push_back(real_field("problem", "s", "fractional order", &RunConfig::problem,
                         &ProblemConfig::s));
  f.push_back(real_field("problem", "alpha", "Riesz order", &RunConfig::problem,
                         &ProblemConfig::alpha));
  f.push_back(real_field("problem", "mu", "mass", &RunConfig::problem, &ProblemConfig::mu));
  f.push_back(nl_string("nonlinearity", "homogeneous|two_power", &NonlinearityConfig::kind));
  f.push_back(nl_string("convention", "power|sqrt_r", &NonlinearityConfig::convention));
  f.push_back(nl_real("r", "growth exponent near 0", &NonlinearityConfig::r));
  f.push_back(nl_real("r2", "second exponent (two_power)", &NonlinearityConfig::r2));
  f.push_back(nl_real("c2", "second coefficient (two_power)", &NonlinearityConfig::c2));
  f.push_back(nl_real("delta", "envelope radius (two_power)", &NonlinearityConfig::delta));

  f.push_back(real_field("grid", "r_min", "first node", &RunConfig::grid, &GridSpec::r_min));
  f.push_back(real_field("grid", "r_max", "last node", &RunConfig::grid, &GridSpec::r_max));
  f.push_back(int_field("grid", "nodes", "node count", &RunConfig::grid, &GridSpec::nodes));

  f.push_back(real_field("solver", "tolerance", "relative sup change", &RunConfig::solver,
                         &SolverOpts::tolerance));
  f.push_back(int_field("solver", "max_iter", "iteration cap", &RunConfig::solver,
                        &SolverOpts::max_iter));
  f.push_back(real_field("solver", "damping", "damping in (0,1]", &RunConfig::solver,
                         &SolverOpts::damping));
  f.push_back(string_field("solver", "init_profile", "h_N+2s|h_beta", &RunConfig::solver,
                           &SolverOpts::init_profile));

  f.push_back({"analysis", "fit_window", "lo, hi",
               [](RunConfig& c, const std::string& v) {
                 const auto w = parse_real_list(v);
                 if (w.size() != 2) throw ConfigError("expected two numbers");
                 c.analysis.fit_lo = w[0];
                 c.analysis.fit_hi = w[1];
               },
               [](const RunConfig& c) {
                 return join_reals({c.analysis.fit_lo, c.analysis.fit_hi});
               }});
  f.push_back({"analysis", "fit_log", "allow the log-corrected tail model",
               [](RunConfig& c, const std::string& v) { c.analysis.fit_log = parse_bool(v); },
               [](const RunConfig& c) { return std::string(c.analysis.fit_log ? "true" : "false"); }});
  f.push_back({"analysis", "theta", "Riesz tail weight in (N, N+alpha], or auto",
               [](RunConfig& c, const std::string& v) { c.analysis.theta = parse_opt_real(v); },
               [](const RunConfig& c) { return opt_real(c.analysis.theta); }});
  f.push_back({"analysis", "chain_rule_theta", "exponent in (0,1), or auto (2-r)",
               [](RunConfig& c, const std::string& v) {
                 c.analysis.chain_rule_theta = parse_opt_real(v);
               },
               [](const RunConfig& c) { return opt_real(c.analysis.chain_rule_theta); }});
  f.push_back({"analysis", "chain_rule_radii", "radii list",
               [](RunConfig& c, const std::string& v) {
                 c.analysis.chain_rule_radii = parse_real_list(v);
               },
               [](const RunConfig& c) { return join_reals(c.analysis.chain_rule_radii); }});
  f.push_back(string_field("analysis", "kappa", "star|none|number", &RunConfig::analysis,
                           &A::kappa));
  auto window = [](std::string key, double A::*lo, double A::*hi) {
    return ConfigField{"analysis", key, "lo, hi",
                       [=](RunConfig& c, const std::string& v) {
                         const auto w = parse_real_list(v);
                         if (w.size() != 2) throw ConfigError("expected two numbers");
                         c.analysis.*lo = w[0];
                         c.analysis.*hi = w[1];
                       },
                       [=](const RunConfig& c) {
                         return join_reals({c.analysis.*lo, c.analysis.*hi});
                       }};
  };
  f.push_back(window("riesz_window", &A::riesz_lo, &A::riesz_hi));
  f.push_back(window("bound_window", &A::bound_lo, &A::bound_hi));
  f.push_back(real_field("analysis", "exponent_tol", "relative", &RunConfig::analysis,
                         &A::exponent_tol));
  f.push_back(real_field("analysis", "constant_tol", "relative", &RunConfig::analysis,
                         &A::constant_tol));
  f.push_back(real_field("analysis", "riesz_tol", "relative", &RunConfig::analysis,
                         &A::riesz_tol));
  f.push_back(real_field("analysis", "pohozaev_tol", "relative", &RunConfig::analysis,
                         &A::pohozaev_tol));
  f.push_back(real_field("analysis", "dilation_tol", "relative to the Pohozaev scale",
                         &RunConfig::analysis, &A::dilation_tol));
  f.push_back(real_field("analysis", "chain_rule_tol", "relative", &RunConfig::analysis,
                         &A::chain_rule_tol));
  f.push_back(real_field("analysis", "residual_tol", "sup residual / sup u", &RunConfig::analysis,
                         &A::residual_tol));

  f.push_back(string_field("output", "directory", "output directory", &RunConfig::output,
                           &OutputConfig::directory));
  f.push_back({"output", "formats", "subset of csv, json",
               [](RunConfig& c, const std::string& v) { c.output.formats = split(v, ','); },
               [](const RunConfig& c) {
                 std::string out;
                 for (size_t i = 0; i < c.output.formats.size(); ++i)
                   out += (i ? ", " : "") + c.output.formats[i];
                 return out;
               }});
  f.push_back({"output", "seed", "unused by the core",
               [](RunConfig& c, const std::string& v) {
                 std::uint64_t x = 0;
                 auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                 if (ec != std::errc() || p != v.data() + v.size() || v.empty())
                   throw ConfigError("not an unsigned integer: '" + v + "'");
                 c.output.seed = x;
               },
               [](const RunConfig& c) { return std::to_string(c.output.seed); }});

  f.push_back(real_field("table", "beta", "profile exponent", &RunConfig::table,
                         &TableConfig::beta));
  f.push_back({"table", "radii", "radii list (may be empty)",
               [](RunConfig& c, const std::string& v) { c.table.radii = parse_real_list(v); },
               [](const RunConfig& c) { return join_reals(c.table.radii); }});

  f.push_back({"oracle", "cases", "N s beta; N s beta; ...",
               [](RunConfig& c, const std::string& v) {
                 std::vector<OracleCase> cases;
                 for (const auto& item : split(v, ';')) {
                   std::istringstream in(item);
                   std::string a, b, d, extra;
                   if (!(in >> a >> b >> d) || (in >> extra))
                     throw ConfigError("oracle case needs 'N s beta': '" + item + "'");
                   cases.push_back({parse_int(a), parse_real(b), parse_real(d)});
                 }
                 c.oracle.cases = cases;
               },
               [](const RunConfig& c) {
                 std::string out;
                 for (size_t i = 0; i < c.oracle.cases.size(); ++i) {
                   const auto& k = c.oracle.cases[i];
                   out += (i ? "; " : "") + std::to_string(k.N) + " " + format_real(k.s) + " " +
                          format_real(k.beta);
                 }
                 return out;
               }});
  f.push_back(real_field("oracle", "r_lo", "comparison range", &RunConfig::oracle,
                         &OracleConfig::r_lo));
  f.push_back(real_field("oracle", "r_hi", "comparison range", &RunConfig::oracle,
                         &OracleConfig::r_hi));
  f.push_back(real_field("oracle", "tolerance", "max relative error", &RunConfig::oracle,
                         &OracleConfig::tolerance));
  return f;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field + ": " + what);
}

}  // namespace

NonlinearitySpec NonlinearityConfig::build() const {
  if (kind == "homogeneous") return NonlinearitySpec::homogeneous(r, convention_from_string(convention));
  if (kind == "two_power") {
    const double a = r, b = r2, c = c2;
    auto f = [a, b, c](double t) {
      return t > 0.0 ? a * std::pow(t, a - 1.0) + c * b * std::pow(t, b - 1.0) : 0.0;
    };
    auto F = [a, b, c](double t) { return t > 0.0 ? std::pow(t, a) + c * std::pow(t, b) : 0.0; };
    const double Cbar = a + std::abs(c) * b * std::pow(delta, b - a);
    const double Cund = c >= 0.0 ? a : a - std::abs(c) * b * std::pow(delta, b - a);
    return NonlinearitySpec::general(a, f, F, Cbar, Cund, delta, a);
  }
  throw ConfigError("problem.nonlinearity: unknown kind '" + kind + "' (homogeneous|two_power)");
}

ProblemParams ProblemConfig::params() const {
  ProblemParams p;
  p.N = N;
  p.s = s;
  p.alpha = alpha;
  p.mu = mu;
  p.nonlinearity = nonlinearity.build();
  return p;
}

bool OutputConfig::wants(const std::string& fmt) const {
  return std::find(formats.begin(), formats.end(), fmt) != formats.end();
}

SolverOpts RunConfig::solver_opts() const {
  SolverOpts o = solver;
  o.grid = grid;
  return o;
}

void RunConfig::validate() const {
  const auto& nl = problem.nonlinearity;
  require(nl.kind == "homogeneous" || nl.kind == "two_power", "problem.nonlinearity",
          "must be homogeneous or two_power");
  require(nl.convention == "power" || nl.convention == "sqrt_r", "problem.convention",
          "must be power or sqrt_r");
  if (nl.kind == "two_power") {
    require(nl.r2 > nl.r, "problem.r2", "must exceed problem.r");
    require(nl.delta > 0.0, "problem.delta", "must be > 0");
  }
  try {
    problem.params().validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }

  require(grid.r_min > 0.0, "grid.r_min", "must be > 0");
  require(grid.r_max > grid.r_min, "grid.r_max", "must exceed grid.r_min");
  require(grid.nodes >= 20, "grid.nodes", "must be >= 20");

  require(solver.tolerance > 0.0, "solver.tolerance", "must be > 0");
  require(solver.max_iter >= 1, "solver.max_iter", "must be >= 1");
  require(solver.damping > 0.0 && solver.damping <= 1.0, "solver.damping", "must lie in (0,1]");
  require(solver.init_profile == "h_N+2s" || solver.init_profile == "h_beta",
          "solver.init_profile", "must be h_N+2s or h_beta");

  const auto& a = analysis;
  require(a.fit_lo > 0.0 && a.fit_hi > a.fit_lo, "analysis.fit_window", "need 0 < lo < hi");
  require(a.fit_hi <= grid.r_max / 10.0 * (1.0 + 1e-12), "analysis.fit_window",
          "must end at or below grid.r_max/10");
  require(a.riesz_lo > 0.0 && a.riesz_hi > a.riesz_lo && a.riesz_hi <= grid.r_max,
          "analysis.riesz_window", "need 0 < lo < hi <= grid.r_max");
  require(a.bound_lo > 0.0 && a.bound_hi > a.bound_lo && a.bound_hi <= grid.r_max,
          "analysis.bound_window", "need 0 < lo < hi <= grid.r_max");
  if (a.theta)
    require(*a.theta > problem.N && *a.theta <= problem.N + problem.alpha, "analysis.theta",
            "must lie in (N, N+alpha]");
  if (a.chain_rule_theta)
    require(*a.chain_rule_theta > 0.0 && *a.chain_rule_theta < 1.0, "analysis.chain_rule_theta",
            "must lie in (0,1)");
  for (double r : a.chain_rule_radii)
    require(r > 0.0 && r <= grid.r_max, "analysis.chain_rule_radii",
            "radii must lie in (0, grid.r_max]");
  if (a.kappa != "star" && a.kappa != "none")
    require(parse_real(a.kappa) > 0.0, "analysis.kappa", "must be star, none or > 0");
  for (double t : {a.exponent_tol, a.constant_tol, a.riesz_tol, a.pohozaev_tol, a.dilation_tol,
                   a.chain_rule_tol, a.residual_tol})
    require(t > 0.0, "analysis", "tolerances must be > 0");

  require(!output.directory.empty(), "output.directory", "must not be empty");
  require(!output.formats.empty(), "output.formats", "must name csv and/or json");
  for (const auto& fmt : output.formats)
    require(fmt == "csv" || fmt == "json", "output.formats", "unknown format '" + fmt + "'");

  require(table.beta > 0.0 && table.beta <= problem.N + 2.0 * problem.s, "table.beta",
          "must lie in (0, N+2s]");
  for (double r : table.radii) require(r > 0.0, "table.radii", "radii must be > 0");

  require(!oracle.cases.empty(), "oracle.cases", "need at least one case");
  for (const auto& k : oracle.cases) {
    require(k.N >= 2 && k.s > 0.0 && k.s < 1.0 && k.beta > 0.0 && k.beta <= k.N + 2.0 * k.s,
            "oracle.cases", "need N >= 2, 0 < s < 1, 0 < beta <= N+2s");
  }
  require(oracle.r_lo >= grid.r_min && oracle.r_hi <= grid.r_max && oracle.r_lo < oracle.r_hi,
          "oracle.r_lo/r_hi", "must be an interval inside the grid");
  require(oracle.tolerance > 0.0, "oracle.tolerance", "must be > 0");
}

const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = make_fields();
  return fields;
}

void set_config_value(RunConfig& cfg, const std::string& name, const std::string& value) {
  for (const auto& f : config_fields()) {
    if (f.name() != name) continue;
    try {
      f.set(cfg, trim(value));
    } catch (const ConfigError& e) {
      throw ConfigError(name + ": " + e.what());
    }
    return;
  }
  throw ConfigError("unknown config key '" + name + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    // ';' also separates oracle cases, so it only starts a comment at column 0
    if (line.empty() || line.front() == ';') continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const std::vector<std::string> known{"problem", "grid",   "solver", "analysis",
                                                  "output",  "table",  "oracle"};
      if (std::find(known.begin(), known.end(), section) == known.end())
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    try {
      set_config_value(cfg, section + "." + trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
  std::string out, section;
  for (const auto& f : config_fields()) {
    if (f.section != section) {
      out += (section.empty() ? "[" : "\n[") + f.section + "]\n";
      section = f.section;
    }
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double num = parse_plain(trim(t.substr(0, slash)));
  const double den = parse_plain(trim(t.substr(slash + 1)));
  if (den == 0.0) throw ConfigError("zero denominator in '" + t + "'");
  return num / den;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_real(item));
  return out;
}

}  // namespace choquard
