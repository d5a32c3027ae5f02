#include "qwoa/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qwoa/error.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/parallel.hpp"
#include "qwoa/qwoa_sim.hpp"
#include "qwoa/text.hpp"

namespace qwoa {

namespace fs = std::filesystem;

std::string to_jsonl(const ExperimentRecord& r) {
  nlohmann::ordered_json j;
  j["config_hash"] = r.config_hash;
  j["n"] = r.n;
  j["instance"] = r.instance_id;
  j["p"] = r.p;
  j["gamma"] = r.params.gamma;
  j["t"] = r.params.t;
  j["beta"] = r.params.beta;
  j["expectation"] = r.expectation;
  j["meas_prob"] = r.meas_prob;
  j["n_evals"] = r.n_evals;
  j["converged"] = r.converged;
  j["optimum"] = r.optimum;
  j["degeneracy"] = r.degeneracy;
  return j.dump();
}

ExperimentRecord parse_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ExperimentRecord r;
    r.config_hash = j.at("config_hash").get<std::string>();
    r.n = j.at("n").get<int>();
    r.instance_id = j.at("instance").get<int>();
    r.p = j.at("p").get<int>();
    r.params = {j.at("gamma").get<double>(), j.at("t").get<double>(), j.at("beta").get<double>()};
    r.expectation = j.at("expectation").get<double>();
    r.meas_prob = j.at("meas_prob").get<double>();
    r.n_evals = j.at("n_evals").get<std::uint64_t>();
    r.converged = j.at("converged").get<bool>();
    r.optimum = j.at("optimum").get<double>();
    r.degeneracy = j.at("degeneracy").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad result record: " + std::string(e.what()));
  }
}

std::vector<ExperimentRecord> read_results(const fs::path& path) {
  std::vector<ExperimentRecord> out;
  const auto text = read_file(path.string());
  for (auto line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    out.push_back(parse_record(line));
  }
  return out;
}

ResultStore::ResultStore(fs::path path) : path_(std::move(path)) {
  if (!fs::exists(path_)) return;
  // A torn final line left by an interrupted writer is cut off so the next
  // append starts on a fresh line.
  const auto text = read_file(path_.string());
  std::size_t pos = 0;
  std::size_t good_end = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const bool complete = nl != std::string::npos;
    const std::string_view line(text.data() + pos, (complete ? nl : text.size()) - pos);
    const std::size_t next = complete ? nl + 1 : text.size();
    if (!trim(line).empty()) {
      try {
        auto r = parse_record(line);
        if (!complete) throw FormatError("unterminated record");
        index_[{r.config_hash, r.n, r.instance_id, r.p}] = records_.size();
        records_.push_back(std::move(r));
      } catch (const FormatError&) {
        if (next < text.size()) throw;
        break;
      }
    }
    good_end = next;
    pos = next;
  }
  if (good_end < text.size()) {
    std::error_code ec;
    fs::resize_file(path_, good_end, ec);
    if (ec) throw IoError("cannot truncate results store " + path_.string());
  }
}

const ExperimentRecord* ResultStore::find(const std::string& hash, int n, int instance,
                                          int p) const {
  const auto it = index_.find({hash, n, instance, p});
  return it == index_.end() ? nullptr : &records_[it->second];
}

void ResultStore::append(std::span<const ExperimentRecord> records) {
  if (records.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open results store " + path_.string());
  for (const auto& r : records) {
    out << to_jsonl(r) << '\n';
    index_[{r.config_hash, r.n, r.instance_id, r.p}] = records_.size();
    records_.push_back(r);
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path_.string());
}

ExperimentRecord run_experiment(const WeightedGraph& graph, int instance_id, int p,
                                const OptimizerConfig& optimizer, const std::string& config_hash) {
  const auto table = build_objective_table(graph);
  const auto opt = optimize(table, p, optimizer);
  const auto psi = evolve(table, expand_schedule(opt.params, p, table.sigma));
  ExperimentRecord r;
  r.config_hash = config_hash;
  r.n = graph.num_vertices();
  r.instance_id = instance_id;
  r.p = p;
  r.params = opt.params;
  r.expectation = opt.expectation;
  r.meas_prob = optimal_probability(psi, table);
  r.n_evals = opt.n_evals;
  r.converged = opt.converged;
  r.optimum = table.optimum;
  r.degeneracy = table.degeneracy();
  return r;
}

PLevelStats summarize_level(int p, std::span<const double> meas_probs, CiMethod method,
                            int resamples, Rng rng) {
  PLevelStats s;
  s.p = p;
  s.count = meas_probs.size();
  s.mean = mean(meas_probs);
  s.ci = method == CiMethod::Normal ? normal_ci(meas_probs)
                                    : bootstrap_ci(meas_probs, resamples, rng);
  return s;
}

namespace {

double solve_line(double x0, double y0, double x1, double y1, double target, double fallback) {
  const double slope = (y1 - y0) / (x1 - x0);
  if (!(slope > 0.0) || !std::isfinite(slope)) return fallback;
  return x0 + (target - y0) / slope;
}

PStarEstimate segment_estimate(const PLevelStats& lo, const PLevelStats& hi, double target,
                               double p_star) {
  PStarEstimate e;
  e.p_lo = lo.p;
  e.p_hi = hi.p;
  e.p_star = p_star;
  // The upper CI line reaches the target first.
  const double a = solve_line(lo.p, lo.ci.hi, hi.p, hi.ci.hi, target, p_star);
  const double b = solve_line(lo.p, lo.ci.lo, hi.p, hi.ci.lo, target, p_star);
  e.ci = {std::min({a, b, p_star}), std::max({a, b, p_star})};
  return e;
}

} // namespace

PStarEstimate interpolate_p_star(const std::map<int, PLevelStats>& per_p, double target) {
  for (auto it = per_p.begin(); it != per_p.end(); ++it) {
    const auto& cur = it->second;
    const auto next = std::next(it);
    if (cur.mean == target) {
      if (next != per_p.end() && next->first == cur.p + 1) {
        return segment_estimate(cur, next->second, target, cur.p);
      }
      if (it != per_p.begin() && std::prev(it)->first == cur.p - 1) {
        return segment_estimate(std::prev(it)->second, cur, target, cur.p);
      }
      PStarEstimate e;
      e.p_star = cur.p;
      e.p_lo = e.p_hi = cur.p;
      e.ci = {cur.p * 1.0, cur.p * 1.0};
      return e;
    }
    if (next == per_p.end() || next->first != cur.p + 1) continue;
    const auto& nx = next->second;
    if (cur.mean < target && target <= nx.mean) {
      const double p_star = cur.p + (target - cur.mean) / (nx.mean - cur.mean);
      return segment_estimate(cur, nx, target, p_star);
    }
  }
  throw InvalidArgument("no consecutive p levels bracket the target");
}

std::optional<PStarEstimate> estimate_p_star(const std::map<int, PLevelStats>& per_p,
                                             double target) {
  if (per_p.empty()) return std::nullopt;
  const auto& first = per_p.begin()->second;
  if (first.mean > target) {
    PStarEstimate e;
    e.p_star = first.p;
    e.p_lo = e.p_hi = first.p;
    e.ci = {first.p * 1.0, first.p * 1.0};
    e.at_boundary = true;
    return e;
  }
  try {
    return interpolate_p_star(per_p, target);
  } catch (const InvalidArgument&) {
    return std::nullopt;
  }
}

bool is_monotone(const std::map<int, PLevelStats>& per_p) {
  const PLevelStats* prev = nullptr;
  for (const auto& [p, s] : per_p) {
    if (prev && s.mean < prev->mean) return false;
    prev = &s;
  }
  return true;
}

namespace {

PLevelStats run_level(const std::vector<const InstanceEntry*>& instances, int n, int p,
                      const RunConfig& config, const std::string& hash, ResultStore& store,
                      unsigned threads) {
  std::vector<ExperimentRecord> level(instances.size());
  std::vector<std::size_t> missing;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    if (const auto* r = store.find(hash, n, instances[k]->id, p)) {
      level[k] = *r;
    } else {
      missing.push_back(k);
    }
  }
  parallel_for(missing.size(), threads, [&](std::size_t m) {
    const auto k = missing[m];
    level[k] = run_experiment(instances[k]->graph, instances[k]->id, p, config.optimizer, hash);
  });
  std::vector<ExperimentRecord> fresh;
  for (auto k : missing) fresh.push_back(level[k]);
  store.append(fresh);

  std::vector<double> probs;
  for (const auto& r : level) probs.push_back(r.meas_prob);
  Rng ci_rng = Rng(config.ci_seed).child(static_cast<std::uint64_t>(n)).child(static_cast<std::uint64_t>(p));
  return summarize_level(p, probs, config.ci, config.bootstrap_resamples, ci_rng);
}

std::vector<const InstanceEntry*> instances_at(const InstanceLibrary& library, int n) {
  auto instances = library.of_size(n);
  if (instances.empty()) {
    throw InvalidArgument("library has no instances of size " + std::to_string(n));
  }
  std::sort(instances.begin(), instances.end(),
            [](const InstanceEntry* a, const InstanceEntry* b) { return a->id < b->id; });
  return instances;
}

} // namespace

std::map<int, PLevelStats> run_levels(const InstanceLibrary& library, int n,
                                      std::span<const int> levels, const RunConfig& config,
                                      ResultStore& store, const SweepOptions& options) {
  const auto instances = instances_at(library, n);
  const auto hash = config.hash();
  std::map<int, PLevelStats> out;
  for (int p : levels) {
    if (p < 1) throw InvalidArgument("p must be >= 1");
    out[p] = run_level(instances, n, p, config, hash, store, options.threads);
    if (options.on_level) options.on_level(out[p]);
  }
  return out;
}

SweepSummary run_sweep(const InstanceLibrary& library, int n, const RunConfig& config,
                       ResultStore& store, const SweepOptions& options) {
  config.validate();
  const auto instances = instances_at(library, n);
  const auto hash = config.hash();
  constexpr int kMinP = 2;

  SweepSummary summary;
  summary.n = n;
  auto level = [&](int p) -> const PLevelStats& {
    auto& s = summary.per_p[p] = run_level(instances, n, p, config, hash, store, options.threads);
    if (options.on_level) options.on_level(s);
    return s;
  };

  int p = config.p_start;
  if (level(p).mean >= config.target) {
    while (p > kMinP && summary.per_p.begin()->second.mean >= config.target) level(--p);
  } else {
    while (summary.per_p.rbegin()->second.mean < config.target && p < config.p_max) level(++p);
  }
  summary.monotone = is_monotone(summary.per_p);
  summary.p_star = estimate_p_star(summary.per_p, config.target);
  return summary;
}

std::map<int, std::map<int, PLevelStats>> summarize_results(
    std::span<const ExperimentRecord> records, const RunConfig& config) {
  std::map<int, std::map<int, std::vector<std::pair<int, double>>>> grouped;
  for (const auto& r : records) grouped[r.n][r.p].emplace_back(r.instance_id, r.meas_prob);
  std::map<int, std::map<int, PLevelStats>> out;
  for (auto& [n, by_p] : grouped) {
    for (auto& [p, items] : by_p) {
      std::sort(items.begin(), items.end());
      std::vector<double> probs;
      for (const auto& [id, v] : items) probs.push_back(v);
      Rng ci_rng = Rng(config.ci_seed).child(static_cast<std::uint64_t>(n)).child(static_cast<std::uint64_t>(p));
      out[n][p] = summarize_level(p, probs, config.ci, config.bootstrap_resamples, ci_rng);
    }
  }
  return out;
}

QuadraticFit fit_required_iterations(const std::map<int, double>& p_star_by_n) {
  if (p_star_by_n.size() < 3) throw InvalidArgument("quadratic fit needs at least 3 sizes");
  std::vector<double> x, y;
  for (const auto& [n, p] : p_star_by_n) {
    x.push_back(n);
    y.push_back(p);
  }
  return fit_quadratic(x, y);
}

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

double four_shot_probability(double meas_prob) {
  if (!(meas_prob >= 0.0 && meas_prob <= 1.0)) {
    throw InvalidArgument("measurement probability must lie in [0, 1]");
  }
  const double miss = 1.0 - meas_prob;
  return 1.0 - (miss * miss) * (miss * miss);
}

double amplification(double meas_prob, std::uint64_t degeneracy, int n) {
  if (degeneracy == 0) throw InvalidArgument("degeneracy must be >= 1");
  return meas_prob * std::ldexp(1.0, n) / static_cast<double>(degeneracy);
}

} // namespace qwoa
