#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

#include "qwoa/instances.hpp"
#include "qwoa/stats.hpp"

namespace qwoa {

/// Largest n for which 2^n-sized arrays are allocated by default.
inline constexpr int kDefaultMaxQubits = 28;

/// Cut value C_b for every bitstring b. Bit i of b is vertex i (bit 0 least
/// significant). C_b and C_{~b} are stored bit-identically.
struct ObjectiveTable {
  int n = 0;
  std::vector<double> values;
  double mean = 0.0;
  double sigma = 0.0;  // population standard deviation
  double optimum = 0.0;
  double minimum = 0.0;
  std::vector<std::uint64_t> optima;  // sorted

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] std::size_t degeneracy() const noexcept { return optima.size(); }
};

/// Values within this distance of C* count as optimal everywhere in the
/// project (optimum set, solved flags).
double optimality_tolerance(double optimum) noexcept;
bool is_optimal_value(double value, double optimum) noexcept;

ObjectiveTable build_objective_table(const WeightedGraph& graph, int max_n = kDefaultMaxQubits);

/// Cut value of one bitstring, summed over edges in stored order.
double cut_value(const WeightedGraph& graph, std::uint64_t bits) noexcept;

/// Bitstrings with C_b >= C_{b ^ (1 << i)} for every i, up to the
/// optimality tolerance.
std::vector<std::uint64_t> local_optima(const ObjectiveTable& table);
std::uint64_t count_local_optima(const ObjectiveTable& table);

/// Per-size local optima counts across a library.
struct LocalOptimaCensus {
  std::map<int, std::vector<std::uint64_t>> per_size;

  void add(int n, std::uint64_t count) { per_size[n].push_back(count); }
  [[nodiscard]] std::map<int, double> medians() const;
};

/// median(n) ~ a * r^n by least squares on log medians.
ExponentialFit fit_exponential_to_medians(const std::map<int, double>& medians);

// Debug dump: "MAXCUTC1", uint64 n, then 2^n little-endian doubles.
void write_table_dump(const ObjectiveTable& table, const std::filesystem::path& path);
std::vector<double> read_table_dump(const std::filesystem::path& path);

} // namespace qwoa
