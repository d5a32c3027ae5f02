#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qwoa/rng.hpp"

namespace qwoa {

struct Edge {
  int i = 0;
  int j = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected weighted graph on vertices 0..n-1. Edges are stored with
/// i < j (input pairs are swapped as needed), sorted lexicographically,
/// with finite strictly positive weights.
class WeightedGraph {
public:
  WeightedGraph(int n, std::vector<Edge> edges);

  [[nodiscard]] int num_vertices() const noexcept { return n_; }
  [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Same graph with every weight multiplied by `factor` (> 0).
  [[nodiscard]] WeightedGraph scaled(double factor) const;

  friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
  int n_;
  std::vector<Edge> edges_;
};

/// Edge-weight distribution. Descriptors:
///   "uniform"          uniform on (0, 1]
///   "uniform:a:b"      uniform on (a, b], 0 <= a < b
///   "const:w"          every weight equals w > 0
class WeightDistribution {
public:
  enum class Kind { Uniform, Constant };

  static WeightDistribution parse(std::string_view descriptor);
  static WeightDistribution uniform(double lo = 0.0, double hi = 1.0);
  static WeightDistribution constant(double w);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] std::string descriptor() const;
  double sample(Rng& rng) const;

private:
  WeightDistribution(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

struct GeneratedInstance {
  WeightedGraph graph;
  int resamples = 0;  // zero-edge draws rejected before this graph
};

/// Erdős–Rényi–Gilbert G(n, edge_prob) with i.i.d. weights. Pairs are
/// visited in (i, j) lexicographic order; zero-edge graphs are redrawn.
GeneratedInstance generate_instance(int n, double edge_prob, const WeightDistribution& weights,
                                    Rng& rng);

struct LibraryConfig {
  std::uint64_t seed = 1;
  std::vector<int> sizes;
  int per_size = 100;
  double edge_prob = 0.5;
  std::string weight_dist = "uniform";
};

struct InstanceEntry {
  int n = 0;
  int id = 0;
  std::string path;      // relative to the library directory
  std::string checksum;  // hex checksum of the instance file
  int resamples = 0;
  WeightedGraph graph;
};

struct InstanceLibrary {
  LibraryConfig config;
  std::vector<InstanceEntry> instances;

  [[nodiscard]] std::vector<const InstanceEntry*> of_size(int n) const;
};

/// Instance (n, id) draws from Rng(seed).child(n).child(id).
GeneratedInstance regenerate_instance(const LibraryConfig& config, int n, int id);
InstanceLibrary generate_library(const LibraryConfig& config);

// Instance text format:
//   maxcut v1 n=<n> m=<m>
//   <i> <j> <w>            (m lines, w in shortest round-trip decimal)
//   checksum=<16 hex>      FNV-1a 64 of every preceding byte
std::string format_instance(const WeightedGraph& graph);
WeightedGraph parse_instance(std::string_view text);
std::string instance_checksum(std::string_view text);

void save_instance(const WeightedGraph& graph, const std::filesystem::path& path);
WeightedGraph load_instance(const std::filesystem::path& path);

inline constexpr int kLibrarySchemaVersion = 1;
inline constexpr const char* kLibraryManifestName = "library.json";

/// Writes <dir>/library.json plus one file per instance under <dir>/n<N>/.
/// `metadata` is stored verbatim under the "metadata" key.
void save_library(const InstanceLibrary& library, const std::filesystem::path& dir,
                  const nlohmann::json& metadata = nlohmann::json::object());
InstanceLibrary load_library(const std::filesystem::path& dir);
nlohmann::json load_library_metadata(const std::filesystem::path& dir);

} // namespace qwoa
