#include "qwoa/local_search.hpp"

#include <cmath>
#include <numeric>

#include "qwoa/error.hpp"

namespace qwoa {

std::string_view to_string(LocalSearchVariant v) noexcept {
  return v == LocalSearchVariant::SteepestAscent ? "steepest" : "firstimp";
}

LocalSearchVariant parse_variant(std::string_view name) {
  if (name == "steepest" || name == "steepest_ascent") return LocalSearchVariant::SteepestAscent;
  if (name == "firstimp" || name == "first_improvement") {
    return LocalSearchVariant::FirstImprovement;
  }
  throw InvalidArgument("unknown local-search variant '" + std::string(name) + "'");
}

LocalSearch::LocalSearch(const WeightedGraph& graph, double optimum)
    : n_(graph.num_vertices()), optimum_(optimum), adj_(graph.num_vertices()), graph_(&graph) {
  if (n_ > 63) throw CapacityError("local search supports n <= 63");
  for (const auto& e : graph.edges()) {
    adj_[e.i].emplace_back(e.j, e.w);
    adj_[e.j].emplace_back(e.i, e.w);
  }
}

double LocalSearch::flip_gain(std::uint64_t state, int i) const noexcept {
  const auto bi = (state >> i) & 1U;
  double gain = 0.0;
  for (const auto& [j, w] : adj_[i]) gain += (((state >> j) & 1U) == bi) ? w : -w;
  return gain;
}

double LocalSearch::value(std::uint64_t state) const noexcept {
  return cut_value(*graph_, state);
}

std::uint64_t LocalSearch::steepest_step(std::uint64_t state) const noexcept {
  int best = -1;
  double best_gain = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double g = flip_gain(state, i);
    if (g > best_gain) {
      best_gain = g;
      best = i;
    }
  }
  return best < 0 ? state : state ^ (std::uint64_t{1} << best);
}

LocalSearchRun LocalSearch::run(LocalSearchVariant variant, Rng& rng) const {
  const std::uint64_t start = rng.below(std::uint64_t{1} << n_);
  return run_from(variant, start, rng);
}

LocalSearchRun LocalSearch::run_from(LocalSearchVariant variant, std::uint64_t start,
                                     Rng& rng) const {
  LocalSearchRun out;
  out.variant = variant;
  out.start = start;
  std::uint64_t state = start;
  double current = value(state);
  std::vector<int> order(static_cast<std::size_t>(n_));

  auto accept = [&](int i, double gain) {
    state ^= std::uint64_t{1} << i;
    current += gain;
    ++out.moves;
    if (verify_incremental && std::abs(current - value(state)) > 1e-9) {
      throw NumericError("incremental cut value drifted from full recomputation");
    }
  };

  while (true) {
    int chosen = -1;
    double chosen_gain = 0.0;
    if (variant == LocalSearchVariant::SteepestAscent) {
      for (int i = 0; i < n_; ++i) {
        const double g = flip_gain(state, i);
        ++out.n_evals;
        if (g > chosen_gain) {
          chosen_gain = g;
          chosen = i;
        }
      }
    } else {
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(std::span<int>(order));
      for (int i : order) {
        const double g = flip_gain(state, i);
        ++out.n_evals;
        if (g > 0.0) {
          chosen = i;
          chosen_gain = g;
          break;
        }
      }
    }
    if (chosen < 0) break;
    accept(chosen, chosen_gain);
  }
  out.final = state;
  out.final_value = current;
  out.solved = is_optimal_value(current, optimum_);
  return out;
}

LocalSearchRun run_local_search(const WeightedGraph& graph, LocalSearchVariant variant, Rng& rng) {
  const auto table = build_objective_table(graph);
  return LocalSearch(graph, table.optimum).run(variant, rng);
}

SolveEstimate estimate_solve_probability(const LocalSearch& search, LocalSearchVariant variant,
                                         std::uint64_t runs, const Rng& rng) {
  if (runs < 1) throw InvalidArgument("need at least one run");
  SolveEstimate est;
  est.runs = runs;
  double evals = 0.0;
  for (std::uint64_t r = 0; r < runs; ++r) {
    Rng child = rng.child(r);
    const auto run = search.run(variant, child);
    est.solved += run.solved ? 1 : 0;
    evals += static_cast<double>(run.n_evals);
  }
  est.p_solve = static_cast<double>(est.solved) / static_cast<double>(runs);
  est.ci95 = wilson_interval(est.solved, runs);
  est.mean_evals = evals / static_cast<double>(runs);
  return est;
}

double exact_solve_probability(const LocalSearch& search, const ObjectiveTable& table) {
  const int n = search.num_vertices();
  if (n > kExactBasinMaxN) throw CapacityError("exact basin computation supports n <= 16");
  if (table.n != n) throw InvalidArgument("table does not match the instance");
  const std::uint64_t size = std::uint64_t{1} << n;
  // 0 = unknown, 1 = ends at an optimum, 2 = ends elsewhere.
  std::vector<std::uint8_t> fate(size, 0);
  std::vector<std::uint64_t> path;
  std::uint64_t hits = 0;
  for (std::uint64_t start = 0; start < size; ++start) {
    path.clear();
    std::uint64_t s = start;
    while (fate[s] == 0) {
      path.push_back(s);
      const auto next = search.steepest_step(s);
      if (next == s) {
        fate[s] = is_optimal_value(table.values[s], table.optimum) ? 1 : 2;
        break;
      }
      s = next;
    }
    for (auto v : path) fate[v] = fate[s];
    hits += fate[start] == 1 ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(size);
}

} // namespace qwoa
