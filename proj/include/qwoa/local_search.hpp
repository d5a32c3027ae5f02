#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qwoa/instances.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/rng.hpp"
#include "qwoa/stats.hpp"

namespace qwoa {

enum class LocalSearchVariant { SteepestAscent, FirstImprovement };

std::string_view to_string(LocalSearchVariant v) noexcept;  // "steepest" / "firstimp"
LocalSearchVariant parse_variant(std::string_view name);

struct LocalSearchRun {
  LocalSearchVariant variant = LocalSearchVariant::SteepestAscent;
  std::uint64_t start = 0;
  std::uint64_t final = 0;
  double final_value = 0.0;
  std::uint64_t n_evals = 0;  // one per neighbour evaluated
  std::uint64_t moves = 0;
  bool solved = false;
};

/// Graph adjacency plus the known optimum C*, shared by every run on one
/// instance. Bit i of a state is vertex i.
class LocalSearch {
public:
  LocalSearch(const WeightedGraph& graph, double optimum);

  [[nodiscard]] int num_vertices() const noexcept { return n_; }
  [[nodiscard]] double optimum() const noexcept { return optimum_; }

  /// Change in cut value from flipping vertex i in `state`.
  [[nodiscard]] double flip_gain(std::uint64_t state, int i) const noexcept;
  [[nodiscard]] double value(std::uint64_t state) const noexcept;

  /// Steepest ascent: best strictly improving flip, ties to the lowest index.
  /// Returns the next state, or `state` itself when it is a local maximum.
  [[nodiscard]] std::uint64_t steepest_step(std::uint64_t state) const noexcept;

  /// Uniform random start, then climb until no flip strictly improves.
  LocalSearchRun run(LocalSearchVariant variant, Rng& rng) const;
  LocalSearchRun run_from(LocalSearchVariant variant, std::uint64_t start, Rng& rng) const;

  /// Recompute the cut value from scratch after every accepted move and
  /// throw NumericError if it drifts from the incremental value by > 1e-9.
  bool verify_incremental = false;

private:
  int n_;
  double optimum_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  const WeightedGraph* graph_;
};

LocalSearchRun run_local_search(const WeightedGraph& graph, LocalSearchVariant variant, Rng& rng);

struct SolveEstimate {
  double p_solve = 0.0;
  Interval ci95;
  double mean_evals = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t solved = 0;
};

/// Run r uses rng.child(r); Wilson 95% interval.
SolveEstimate estimate_solve_probability(const LocalSearch& search, LocalSearchVariant variant,
                                         std::uint64_t runs, const Rng& rng);

inline constexpr int kExactBasinMaxN = 16;

/// Fraction of the 2^n starts from which steepest ascent ends at a global
/// optimum. Exact; n <= 16.
double exact_solve_probability(const LocalSearch& search, const ObjectiveTable& table);

} // namespace qwoa
