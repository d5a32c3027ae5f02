#include "qwoa/landscape.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "qwoa/binary_io.hpp"
#include "qwoa/error.hpp"

namespace qwoa {

double optimality_tolerance(double optimum) noexcept {
  return 1e-9 * std::max(1.0, std::abs(optimum));
}

bool is_optimal_value(double value, double optimum) noexcept {
  return std::abs(value - optimum) <= optimality_tolerance(optimum);
}

double cut_value(const WeightedGraph& graph, std::uint64_t bits) noexcept {
  double c = 0.0;
  for (const auto& e : graph.edges()) {
    if (((bits >> e.i) ^ (bits >> e.j)) & 1U) c += e.w;
  }
  return c;
}

ObjectiveTable build_objective_table(const WeightedGraph& graph, int max_n) {
  const int n = graph.num_vertices();
  if (n > max_n || n > 62) {
    throw CapacityError("n = " + std::to_string(n) + " exceeds the table cap of " +
                        std::to_string(max_n));
  }
  ObjectiveTable t;
  t.n = n;
  const std::uint64_t size = std::uint64_t{1} << n;
  t.values.assign(size, 0.0);

  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : graph.edges()) {
    adj[e.i].emplace_back(e.j, e.w);
    adj[e.j].emplace_back(e.i, e.w);
  }

  // Lower half (top bit clear): C[b | 2^k] = C[b] + flip gain of vertex k,
  // for b < 2^k, where every vertex above k is on the 0 side.
  const std::uint64_t half = size >> 1;
  auto& c = t.values;
  for (int k = 0; k + 1 < n; ++k) {
    const std::uint64_t block = std::uint64_t{1} << k;
    for (std::uint64_t b = 0; b < block; ++b) {
      double gain = 0.0;
      for (const auto& [j, w] : adj[k]) gain += ((b >> j) & 1U) ? -w : w;
      c[b | block] = c[b] + gain;
    }
  }
  for (std::uint64_t b = 0; b < half; ++b) c[b ^ (size - 1)] = c[b];

  // Two-pass population moments.
  double sum = 0.0;
  for (double v : c) sum += v;
  t.mean = sum / static_cast<double>(size);
  double ss = 0.0;
  for (double v : c) ss += (v - t.mean) * (v - t.mean);
  t.sigma = std::sqrt(ss / static_cast<double>(size));

  const auto [mn, mx] = std::minmax_element(c.begin(), c.end());
  t.minimum = *mn;
  t.optimum = *mx;
  const double tol = optimality_tolerance(t.optimum);
  for (std::uint64_t b = 0; b < size; ++b) {
    if (c[b] >= t.optimum - tol) t.optima.push_back(b);
  }
  return t;
}

namespace {

// Neighbours within the optimality tolerance count as ties. The table's
// mirrored half can split a mathematical tie (an isolated top vertex) by
// one rounding step.
bool is_local_optimum(const ObjectiveTable& table, std::uint64_t b, double tol) {
  const auto& c = table.values;
  for (int i = 0; i < table.n; ++i) {
    if (c[b ^ (std::uint64_t{1} << i)] > c[b] + tol) return false;
  }
  return true;
}

} // namespace

std::vector<std::uint64_t> local_optima(const ObjectiveTable& table) {
  std::vector<std::uint64_t> out;
  const double tol = optimality_tolerance(table.optimum);
  for (std::uint64_t b = 0; b < table.size(); ++b) {
    if (is_local_optimum(table, b, tol)) out.push_back(b);
  }
  return out;
}

std::uint64_t count_local_optima(const ObjectiveTable& table) {
  const double tol = optimality_tolerance(table.optimum);
  std::uint64_t count = 0;
  for (std::uint64_t b = 0; b < table.size(); ++b) count += is_local_optimum(table, b, tol) ? 1 : 0;
  return count;
}

std::map<int, double> LocalOptimaCensus::medians() const {
  std::map<int, double> out;
  for (const auto& [n, counts] : per_size) {
    std::vector<double> v(counts.begin(), counts.end());
    out[n] = median(v);
  }
  return out;
}

ExponentialFit fit_exponential_to_medians(const std::map<int, double>& medians) {
  if (medians.size() < 3) throw InvalidArgument("exponential fit needs at least 3 sizes");
  std::vector<double> x, y;
  for (const auto& [n, m] : medians) {
    if (!(m > 0.0)) throw InvalidArgument("median must be positive to take logs");
    x.push_back(n);
    y.push_back(m);
  }
  return fit_exponential(x, y);
}

void write_table_dump(const ObjectiveTable& table, const std::filesystem::path& path) {
  BinaryWriter out(path);
  out.magic("MAXCUTC1");
  out.u64(static_cast<std::uint64_t>(table.n));
  for (double v : table.values) out.f64(v);
  out.close();
}

std::vector<double> read_table_dump(const std::filesystem::path& path) {
  BinaryReader in(path);
  in.expect_magic("MAXCUTC1");
  const auto n = in.u64();
  if (n > 62) throw FormatError("table dump has implausible n");
  std::vector<double> values(std::size_t{1} << n);
  for (auto& v : values) v = in.f64();
  in.expect_end();
  return values;
}

} // namespace qwoa
