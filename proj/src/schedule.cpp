#include "qwoa/schedule.hpp"

#include <cmath>

#include <json.hpp>

#include "qwoa/error.hpp"

namespace qwoa {

namespace {

Eigen::VectorXd to_vector(const ScheduleParams& p) {
  Eigen::VectorXd v(3);
  v << p.gamma, p.t, p.beta;
  return v;
}

ScheduleParams from_vector(const Eigen::VectorXd& v) { return {v(0), v(1), v(2)}; }

optim::Box parameter_box() {
  optim::Box box{Eigen::VectorXd::Zero(3), Eigen::VectorXd(3)};
  box.upper << ScheduleParams::kGammaMax, ScheduleParams::kTimeMax, ScheduleParams::kBetaMax;
  return box;
}

} // namespace

bool ScheduleParams::within_bounds() const noexcept {
  return gamma >= 0.0 && gamma <= kGammaMax && t >= 0.0 && t <= kTimeMax && beta >= 0.0 &&
         beta <= kBetaMax;
}

LayerSchedule expand_schedule(const ScheduleParams& params, int p, double sigma) {
  if (p < 1) throw InvalidArgument("layer count must be >= 1");
  if (!(sigma > 0.0)) throw InvalidArgument("objective standard deviation must be > 0");
  LayerSchedule s;
  s.gammas.resize(static_cast<std::size_t>(p));
  s.times.resize(static_cast<std::size_t>(p));
  const double scale = params.gamma / sigma;
  if (p == 1) {
    s.gammas[0] = scale;
    s.times[0] = params.t;
    return s;
  }
  for (int k = 0; k < p; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(p - 1);
    s.gammas[k] = scale * (params.beta + frac * (1.0 - params.beta));
    s.times[k] = params.t * (1.0 + frac * (params.beta - 1.0));
  }
  return s;
}

QwoaObjective::QwoaObjective(const ObjectiveTable& table, int p)
    : table_(table), p_(p), work_(table.n) {
  if (p < 1) throw InvalidArgument("layer count must be >= 1");
}

double QwoaObjective::operator()(const ScheduleParams& params) {
  if (!params.within_bounds()) throw InvalidArgument("schedule parameters outside bounds");
  ++evaluations_;
  evolve_into(work_, table_, expand_schedule(params, p_, table_.sigma));
  return -expectation(work_, table_);
}

Statevector QwoaObjective::state(const ScheduleParams& params) const {
  return evolve(table_, expand_schedule(params, p_, table_.sigma));
}

double qwoa_objective(const ScheduleParams& params, int p, const ObjectiveTable& table) {
  QwoaObjective f(table, p);
  return f(params);
}

std::vector<ScheduleParams> latin_hypercube_starts(int count, std::uint64_t seed) {
  std::vector<ScheduleParams> out(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0) return out;
  Rng rng(seed);
  const double upper[3] = {ScheduleParams::kGammaMax, ScheduleParams::kTimeMax,
                           ScheduleParams::kBetaMax};
  for (int dim = 0; dim < 3; ++dim) {
    std::vector<int> strata(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) strata[k] = k;
    rng.shuffle(std::span<int>(strata));
    for (int k = 0; k < count; ++k) {
      const double u = (strata[k] + rng.uniform01()) / count;
      double* field = dim == 0 ? &out[k].gamma : dim == 1 ? &out[k].t : &out[k].beta;
      *field = u * upper[dim];
    }
  }
  return out;
}

OptimizationResult optimize_from(const std::function<double(const ScheduleParams&)>& objective,
                                 const ScheduleParams& x0, const optim::Settings& settings) {
  if (!x0.within_bounds()) throw InvalidArgument("initial parameters outside bounds");
  const auto res = optim::minimize(
      [&](const Eigen::VectorXd& v) { return objective(from_vector(v)); }, to_vector(x0),
      parameter_box(), settings);
  OptimizationResult out;
  out.params = from_vector(res.x);
  out.expectation = -res.value;
  out.n_evals = res.evaluations;
  out.converged = res.converged();
  out.status = optim::to_string(res.status);
  out.iterations = res.iterations;
  for (const auto& e : res.trace) out.trace.push_back({e.index, from_vector(e.x), e.value});
  return out;
}

OptimizationResult optimize(const ObjectiveTable& table, int p, const OptimizerConfig& config) {
  if (!config.x0.within_bounds()) throw InvalidArgument("initial parameters outside bounds");
  if (config.multistart < 1) throw InvalidArgument("multistart must be >= 1");
  std::vector<ScheduleParams> starts{config.x0};
  for (const auto& s : latin_hypercube_starts(config.multistart - 1, config.multistart_seed)) {
    starts.push_back(s);
  }

  QwoaObjective f(table, p);
  auto call = [&f](const ScheduleParams& x) { return f(x); };
  OptimizationResult best;
  std::uint64_t total_evals = 0;
  std::vector<TracePoint> trace;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    auto res = optimize_from(call, starts[k], config.settings);
    for (auto& tp : res.trace) {
      tp.eval += total_evals;
      trace.push_back(tp);
    }
    total_evals += res.n_evals;
    if (k == 0 || res.expectation > best.expectation) best = std::move(res);
  }
  best.n_evals = total_evals;
  best.trace = std::move(trace);
  return best;
}

std::string format_trace_jsonl(const std::vector<TracePoint>& trace) {
  std::string out;
  for (const auto& tp : trace) {
    nlohmann::ordered_json line;
    line["eval"] = tp.eval;
    line["gamma"] = tp.params.gamma;
    line["t"] = tp.params.t;
    line["beta"] = tp.params.beta;
    line["value"] = tp.value;
    out += line.dump() + "\n";
  }
  return out;
}

} // namespace qwoa
