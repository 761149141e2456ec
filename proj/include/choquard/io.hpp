#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "choquard/config.hpp"
#include "choquard/solver.hpp"

namespace choquard {

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_real(double x);

/// Rows of pre-formatted cells under a header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  void add_reals(const std::vector<double>& row);
};

/// Comma separated, header row, LF line endings.
std::string to_csv(const Table& t);
/// Array of objects; numeric-looking cells become numbers.
nlohmann::json to_json(const Table& t);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

/// Non-finite doubles as strings, finite ones as numbers.
nlohmann::json json_real(double x);
double real_from_json(const nlohmann::json& j);

inline constexpr int kSolutionSchemaVersion = 1;

/// Self-describing solution record: parameters, grid, values, tail, diagnostics.
nlohmann::json solution_to_json(const Solution& sol, const NonlinearityConfig& nl,
                                const GridSpec& grid);

struct LoadedSolution {
  Solution solution;
  NonlinearityConfig nonlinearity;
  GridSpec grid;
};

/// Rebuilds the grid and checks that the stored nodes match it bitwise.
LoadedSolution solution_from_json(const nlohmann::json& j);
LoadedSolution load_solution(const std::string& path);

}  // namespace choquard
