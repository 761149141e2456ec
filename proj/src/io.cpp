#include "choquard/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "choquard/error.hpp"

namespace choquard {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw Error("table: row width does not match the header");
  rows.push_back(std::move(row));
}

void Table::add_reals(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double x : row) cells.push_back(format_real(x));
  add(std::move(cells));
}

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return out;
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (size_t i = 0; i < r.size(); ++i) {
      const std::string& c = r[i];
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (!c.empty() && end == c.c_str() + c.size() && std::isfinite(v))
        obj[t.columns[i]] = v;
      else
        obj[t.columns[i]] = c;
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

nlohmann::json json_real(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

double real_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw ConfigError("expected a number in JSON, got " + j.dump());
}

nlohmann::json solution_to_json(const Solution& sol, const NonlinearityConfig& nl,
                                const GridSpec& grid) {
  using nlohmann::json;
  const auto& p = sol.params;
  json j;
  j["schema"] = "choquard-solution";
  j["version"] = kSolutionSchemaVersion;
  j["params"] = {{"N", p.N},
                 {"s", p.s},
                 {"alpha", p.alpha},
                 {"mu", p.mu},
                 {"nonlinearity",
                  {{"kind", nl.kind},
                   {"convention", nl.convention},
                   {"r", nl.r},
                   {"r2", nl.r2},
                   {"c2", nl.c2},
                   {"delta", nl.delta}}}};
  j["grid"] = {{"r_min", grid.r_min}, {"r_max", grid.r_max}, {"nodes", grid.nodes},
               {"r", sol.u.g().nodes}};
  j["u"] = sol.u.values();
  j["tail"] = {{"amplitude", sol.u.tail().amplitude}, {"exponent", sol.u.tail().exponent}};
  j["value_at_origin"] = sol.u.value_at_origin();
  j["diagnostics"] = {{"residual_sup", json_real(sol.residual_sup)},
                      {"pohozaev_defect", json_real(sol.pohozaev_defect)},
                      {"iterations", sol.iterations},
                      {"norm_r", json_real(sol.norm_r)},
                      {"mass_F", json_real(sol.mass_F)},
                      {"multiplier", json_real(sol.multiplier)}};
  j["trace"] = json::array();
  for (double x : sol.trace) j["trace"].push_back(json_real(x));
  return j;
}

LoadedSolution solution_from_json(const nlohmann::json& j) {
  try {
    if (j.value("schema", "") != "choquard-solution")
      throw ConfigError("solution file: missing or wrong schema tag");
    if (j.at("version").get<int>() != kSolutionSchemaVersion)
      throw ConfigError("solution file: unsupported version");
    const auto& P = j.at("params");
    const auto& NL = P.at("nonlinearity");
    NonlinearityConfig nl;
    nl.kind = NL.at("kind").get<std::string>();
    nl.convention = NL.at("convention").get<std::string>();
    nl.r = NL.at("r").get<double>();
    nl.r2 = NL.at("r2").get<double>();
    nl.c2 = NL.at("c2").get<double>();
    nl.delta = NL.at("delta").get<double>();

    ProblemParams params;
    params.N = P.at("N").get<int>();
    params.s = P.at("s").get<double>();
    params.alpha = P.at("alpha").get<double>();
    params.mu = P.at("mu").get<double>();
    params.nonlinearity = nl.build();

    const auto& G = j.at("grid");
    GridSpec spec;
    spec.r_min = G.at("r_min").get<double>();
    spec.r_max = G.at("r_max").get<double>();
    spec.nodes = G.at("nodes").get<int>();
    const auto grid = RadialGrid::logarithmic(params.N, spec.r_min, spec.r_max, spec.nodes);
    const auto stored = G.at("r").get<std::vector<double>>();
    if (stored != grid->nodes) throw ConfigError("solution file: grid nodes do not match");

    auto values = j.at("u").get<std::vector<double>>();
    if (static_cast<int>(values.size()) != grid->size())
      throw ConfigError("solution file: value count does not match the grid");
    const TailModel tail{j.at("tail").at("amplitude").get<double>(),
                         j.at("tail").at("exponent").get<double>()};
    RadialFunction u(grid, std::move(values), tail, j.at("value_at_origin").get<double>());

    Solution sol(u, params);
    const auto& D = j.at("diagnostics");
    sol.residual_sup = real_from_json(D.at("residual_sup"));
    sol.pohozaev_defect = real_from_json(D.at("pohozaev_defect"));
    sol.iterations = D.at("iterations").get<int>();
    sol.norm_r = real_from_json(D.at("norm_r"));
    sol.mass_F = real_from_json(D.at("mass_F"));
    sol.multiplier = real_from_json(D.at("multiplier"));
    for (const auto& x : j.at("trace")) sol.trace.push_back(real_from_json(x));
    return LoadedSolution{std::move(sol), nl, spec};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solution file: ") + e.what());
  }
}

LoadedSolution load_solution(const std::string& path) { return solution_from_json(read_json(path)); }

}  // namespace choquard
