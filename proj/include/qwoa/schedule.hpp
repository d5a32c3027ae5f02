#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qwoa/lbfgsb.hpp"
#include "qwoa/qwoa_sim.hpp"

namespace qwoa {

/// The three schedule parameters. Bounds: gamma in [0, 5], t in [0, 0.7],
/// beta in [0, 0.5].
struct ScheduleParams {
  double gamma = 0.0;
  double t = 0.0;
  double beta = 0.0;

  static constexpr double kGammaMax = 5.0;
  static constexpr double kTimeMax = 0.7;
  static constexpr double kBetaMax = 0.5;

  [[nodiscard]] bool within_bounds() const noexcept;
  friend bool operator==(const ScheduleParams&, const ScheduleParams&) = default;
};

/// Linear ramps over k = 1..p:
///   gamma_k = (gamma / sigma) (beta + (k-1)/(p-1) (1 - beta))
///   t_k     = t (1 + (k-1)/(p-1) (beta - 1))
/// For p = 1 the single layer takes gamma_1 = gamma / sigma and t_1 = t.
LayerSchedule expand_schedule(const ScheduleParams& params, int p, double sigma);

/// Negative expectation of the evolved state, with an evaluation counter.
/// Holds a reference to the table; the table must outlive it.
class QwoaObjective {
public:
  QwoaObjective(const ObjectiveTable& table, int p);

  double operator()(const ScheduleParams& params);
  [[nodiscard]] std::uint64_t evaluations() const noexcept { return evaluations_; }
  [[nodiscard]] int layers() const noexcept { return p_; }
  /// Final state at `params` (does not count as an evaluation).
  [[nodiscard]] Statevector state(const ScheduleParams& params) const;

private:
  const ObjectiveTable& table_;
  int p_;
  std::uint64_t evaluations_ = 0;
  Statevector work_;
};

/// One-shot form of QwoaObjective.
double qwoa_objective(const ScheduleParams& params, int p, const ObjectiveTable& table);

struct OptimizerConfig {
  ScheduleParams x0{0.75, 0.35, 0.25};
  /// Total starting points: x0 plus (multistart - 1) Latin-hypercube points.
  int multistart = 4;
  std::uint64_t multistart_seed = 0x5eed;
  optim::Settings settings{};
};

struct TracePoint {
  std::uint64_t eval = 0;
  ScheduleParams params;
  double value = 0.0;
};

struct OptimizationResult {
  ScheduleParams params;
  double expectation = 0.0;
  std::uint64_t n_evals = 0;
  bool converged = false;
  std::string status;
  int iterations = 0;
  std::vector<TracePoint> trace;
};

/// Deterministic Latin-hypercube points inside the parameter box.
std::vector<ScheduleParams> latin_hypercube_starts(int count, std::uint64_t seed);

/// Maximises the expectation over the box from each start and keeps the
/// best. n_evals and trace cover every start.
OptimizationResult optimize(const ObjectiveTable& table, int p, const OptimizerConfig& config);

/// Single start from `x0`, generic objective (values are minimised).
OptimizationResult optimize_from(const std::function<double(const ScheduleParams&)>& objective,
                                 const ScheduleParams& x0, const optim::Settings& settings);

/// JSON lines {"eval":k,"gamma":..,"t":..,"beta":..,"value":..}.
std::string format_trace_jsonl(const std::vector<TracePoint>& trace);

} // namespace qwoa
