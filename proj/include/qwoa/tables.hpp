#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwoa/bench.hpp"
#include "qwoa/local_search.hpp"
#include "qwoa/stats.hpp"

// CSV and JSON artifacts exchanged between CLI stages. Every CSV starts
// with a "# config_hash=<hex>" line ahead of its column header.
namespace qwoa {

struct CsvTable {
  std::string config_hash;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(std::string_view name) const;
};

std::string format_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Census: n,instance_id,local_optima_count
struct CensusRow {
  int n = 0;
  int instance_id = 0;
  std::uint64_t count = 0;
};
CsvTable census_table(const std::string& hash, const std::vector<CensusRow>& rows);
std::vector<CensusRow> census_rows(const CsvTable& table);

/// Local search: n,instance_id,variant,runs,p_solve,ci_lo,ci_hi,mean_evals
struct LocalSearchRow {
  int n = 0;
  int instance_id = 0;
  LocalSearchVariant variant = LocalSearchVariant::SteepestAscent;
  std::uint64_t runs = 0;
  double p_solve = 0.0;
  Interval ci;
  double mean_evals = 0.0;
};
CsvTable local_search_table(const std::string& hash, const std::vector<LocalSearchRow>& rows);
std::vector<LocalSearchRow> local_search_rows(const CsvTable& table);

/// p*: n,p_lo,p_hi,p_star,ci_lo,ci_hi,bracketed,at_boundary,monotone
struct PStarRow {
  int n = 0;
  std::optional<PStarEstimate> estimate;
  bool monotone = true;
};
CsvTable pstar_table(const std::string& hash, const std::vector<PStarRow>& rows);
std::vector<PStarRow> pstar_rows(const CsvTable& table);

/// Fit file: {"config_hash", "model", "coefficients", "residual_norm", "points"}.
struct FitFile {
  std::string config_hash;
  std::string model;  // "quadratic" or "exponential"
  QuadraticFit quadratic;
  ExponentialFit exponential;
  std::map<int, double> points;

  [[nodiscard]] double predict(double n) const;
};
nlohmann::ordered_json to_json(const FitFile& fit);
FitFile read_fit(const std::filesystem::path& path);

} // namespace qwoa
