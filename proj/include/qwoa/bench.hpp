#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwoa/config.hpp"
#include "qwoa/instances.hpp"
#include "qwoa/schedule.hpp"
#include "qwoa/stats.hpp"

namespace qwoa {

/// One optimised (instance, p) pair.
struct ExperimentRecord {
  std::string config_hash;
  int n = 0;
  int instance_id = 0;
  int p = 0;
  ScheduleParams params;
  double expectation = 0.0;
  double meas_prob = 0.0;
  std::uint64_t n_evals = 0;
  bool converged = false;
  double optimum = 0.0;
  std::uint64_t degeneracy = 0;
};

std::string to_jsonl(const ExperimentRecord& r);
ExperimentRecord parse_record(std::string_view line);
std::vector<ExperimentRecord> read_results(const std::filesystem::path& path);

/// Append-only JSON-lines store keyed by (config hash, n, instance, p).
/// Existing records are loaded on construction so sweeps resume.
class ResultStore {
public:
  explicit ResultStore(std::filesystem::path path);

  [[nodiscard]] const ExperimentRecord* find(const std::string& hash, int n, int instance,
                                             int p) const;
  void append(std::span<const ExperimentRecord> records);
  [[nodiscard]] const std::vector<ExperimentRecord>& records() const noexcept { return records_; }
  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
  std::filesystem::path path_;
  std::vector<ExperimentRecord> records_;
  std::map<std::tuple<std::string, int, int, int>, std::size_t> index_;
};

/// Optimise one instance at depth p and read off the measurement probability
/// of the state that maximises the expectation.
ExperimentRecord run_experiment(const WeightedGraph& graph, int instance_id, int p,
                                const OptimizerConfig& optimizer, const std::string& config_hash);

struct PLevelStats {
  int p = 0;
  double mean = 0.0;
  Interval ci;
  std::size_t count = 0;
};

PLevelStats summarize_level(int p, std::span<const double> meas_probs, CiMethod method,
                            int resamples, Rng rng);

struct PStarEstimate {
  double p_star = 0.0;
  Interval ci;
  int p_lo = 0;
  int p_hi = 0;
  bool at_boundary = false;  // target already met at the smallest swept p
};

/// Linear interpolation of the mean curve between consecutive p with
/// mean(p_lo) < target <= mean(p_hi); an exact hit returns that p. The CI
/// comes from solving the interpolated upper and lower CI lines for the
/// target on the same segment. Throws InvalidArgument without a bracket.
PStarEstimate interpolate_p_star(const std::map<int, PLevelStats>& per_p, double target);

/// Like interpolate_p_star, but a target already met at the smallest p
/// gives p_star = that p flagged at_boundary. nullopt when unbracketed.
std::optional<PStarEstimate> estimate_p_star(const std::map<int, PLevelStats>& per_p,
                                             double target);

/// True when mean measurement probability never decreases with p.
bool is_monotone(const std::map<int, PLevelStats>& per_p);

struct SweepSummary {
  int n = 0;
  std::map<int, PLevelStats> per_p;
  std::optional<PStarEstimate> p_star;
  bool monotone = true;

  [[nodiscard]] bool bracketed() const noexcept { return p_star.has_value(); }
};

struct SweepOptions {
  unsigned threads = 1;
  /// Called after each completed p level.
  std::function<void(const PLevelStats&)> on_level;
};

/// Adaptive p sweep at size n: start at p_start, step up until the mean
/// measurement probability reaches the target, or step down (not below 2)
/// while it is already met. Records go to `store`; cached ones are reused.
SweepSummary run_sweep(const InstanceLibrary& library, int n, const RunConfig& config,
                       ResultStore& store, const SweepOptions& options = {});

/// Runs the fixed p levels at size n (no adaptive search).
std::map<int, PLevelStats> run_levels(const InstanceLibrary& library, int n,
                                      std::span<const int> levels, const RunConfig& config,
                                      ResultStore& store, const SweepOptions& options = {});

/// Per-(n, p) statistics for every record carrying `config_hash`.
std::map<int, std::map<int, PLevelStats>> summarize_results(
    std::span<const ExperimentRecord> records, const RunConfig& config);

/// Least-squares p(n) = a n^2 + b n + c over >= 3 sizes.
QuadraticFit fit_required_iterations(const std::map<int, double>& p_star_by_n);

int round_half_up(double x);
/// 1 - (1 - p)^4
double four_shot_probability(double meas_prob);
/// meas_prob / (M / 2^n)
double amplification(double meas_prob, std::uint64_t degeneracy, int n);

} // namespace qwoa
