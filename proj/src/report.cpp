#include "qwoa/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "qwoa/error.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/qwoa_sim.hpp"
#include "qwoa/svg_plot.hpp"
#include "qwoa/text.hpp"

namespace qwoa {

namespace fs = std::filesystem;

namespace {

const std::string kMissing = "nan";

std::string fmt(double v) { return std::isfinite(v) ? format_double(v) : kMissing; }

struct LsAggregate {
  double p_solve = 0.0;
  Interval ci;
  double mean_evals = 0.0;
  std::size_t instances = 0;
};

std::map<int, LsAggregate> aggregate_local_search(const std::vector<LocalSearchRow>& rows,
                                                  LocalSearchVariant variant) {
  std::map<int, std::vector<const LocalSearchRow*>> by_n;
  for (const auto& r : rows) {
    if (r.variant == variant) by_n[r.n].push_back(&r);
  }
  std::map<int, LsAggregate> out;
  for (const auto& [n, list] : by_n) {
    std::vector<double> ps, evals;
    for (const auto* r : list) {
      ps.push_back(r->p_solve);
      evals.push_back(r->mean_evals);
    }
    out[n] = {mean(ps), normal_ci(ps), mean(evals), list.size()};
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text, ReportOutput& out) {
  write_file(path.string(), text);
  out.files.push_back(path.filename().string());
}

} // namespace

ReportOutput comparison_report(const ReportInputs& in, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string());
  ReportOutput out;
  const auto& hash = in.config_hash;

  // Quantum records grouped by (n, p), ordered by instance.
  std::map<int, std::map<int, std::vector<const ExperimentRecord*>>> quantum;
  for (const auto& r : in.quantum) quantum[r.n][r.p].push_back(&r);
  for (auto& [n, by_p] : quantum) {
    for (auto& [p, list] : by_p) {
      std::sort(list.begin(), list.end(), [](auto* a, auto* b) { return a->instance_id < b->instance_id; });
    }
  }
  const auto levels = summarize_results(in.quantum, in.config);

  const bool have_ls = !in.local_search.empty();
  if (!have_ls) out.warnings.push_back("no local-search results: quantum-only comparison");
  const auto steep = aggregate_local_search(in.local_search, LocalSearchVariant::SteepestAscent);
  const auto first = aggregate_local_search(in.local_search, LocalSearchVariant::FirstImprovement);

  std::set<int> sizes;
  for (const auto& [n, _] : quantum) sizes.insert(n);
  for (const auto& r : in.local_search) sizes.insert(r.n);

  // comparison.csv and fig_comparison.csv (same rows).
  CsvTable cmp{hash,
               {"n", "p", "instances", "meas_prob_mean", "four_shot_mean", "four_shot_ci_lo",
                "four_shot_ci_hi", "quantum_evals", "amplification_mean",
                "grover_amplification_at_p", "grover_iterations_mean", "status"},
               {}};
  if (have_ls) {
    for (const char* v : {"steepest", "firstimp"}) {
      for (const char* col : {"_p_solve", "_ci_lo", "_ci_hi", "_mean_evals"}) {
        cmp.header.push_back(std::string(v) + col);
      }
    }
  }

  CsvTable typical{hash, {"n", "p", "instances", "median", "q25", "q75", "unamplified_mean"}, {}};
  std::vector<double> fig_n, q_prob, q_lo, q_hi, q_evals, t_med, t_q25, t_q75, t_base;

  for (int n : sizes) {
    const int p = round_half_up(in.fit.predict(n));
    std::vector<std::string> row{std::to_string(n), std::to_string(p)};
    const auto qn = quantum.find(n);
    const std::vector<const ExperimentRecord*>* recs = nullptr;
    if (qn != quantum.end()) {
      const auto it = qn->second.find(p);
      if (it != qn->second.end()) recs = &it->second;
    }
    if (recs) {
      std::vector<double> probs, shots, amps, grover_p, base;
      double grover_amp = 0.0;
      for (const auto* r : *recs) {
        probs.push_back(r->meas_prob);
        shots.push_back(four_shot_probability(std::clamp(r->meas_prob, 0.0, 1.0)));
        amps.push_back(amplification(r->meas_prob, r->degeneracy, n));
        const std::uint64_t space = std::uint64_t{1} << n;
        grover_p.push_back(grover_required_iterations(space, r->degeneracy, in.config.target));
        grover_amp += grover_success_probability(space, r->degeneracy, p) /
                      (static_cast<double>(r->degeneracy) / static_cast<double>(space));
        base.push_back(static_cast<double>(r->degeneracy) / static_cast<double>(space));
      }
      grover_amp /= static_cast<double>(recs->size());
      const auto shot_ci = normal_ci(shots);
      row.insert(row.end(), {std::to_string(recs->size()), fmt(mean(probs)), fmt(mean(shots)),
                             fmt(shot_ci.lo), fmt(shot_ci.hi), std::to_string(4 * p),
                             fmt(mean(amps)), fmt(grover_amp), fmt(mean(grover_p)), "ok"});
      typical.rows.push_back({std::to_string(n), std::to_string(p), std::to_string(recs->size()),
                              fmt(median(probs)), fmt(quantile(probs, 0.25)),
                              fmt(quantile(probs, 0.75)), fmt(mean(base))});
      fig_n.push_back(n);
      q_prob.push_back(mean(shots));
      q_lo.push_back(shot_ci.lo);
      q_hi.push_back(shot_ci.hi);
      q_evals.push_back(4.0 * p);
      t_med.push_back(median(probs));
      t_q25.push_back(quantile(probs, 0.25));
      t_q75.push_back(quantile(probs, 0.75));
      t_base.push_back(mean(base));
    } else {
      out.partial = true;
      out.warnings.push_back("no quantum records at n=" + std::to_string(n) +
                             ", p=" + std::to_string(p));
      row.insert(row.end(), {"0", kMissing, kMissing, kMissing, kMissing, std::to_string(4 * p),
                             kMissing, kMissing, kMissing, "missing_quantum"});
    }
    if (have_ls) {
      for (const auto* agg : {&steep, &first}) {
        const auto it = agg->find(n);
        if (it == agg->end()) {
          row.insert(row.end(), {kMissing, kMissing, kMissing, kMissing});
          out.partial = true;
        } else {
          const auto& a = it->second;
          row.insert(row.end(), {fmt(a.p_solve), fmt(a.ci.lo), fmt(a.ci.hi), fmt(a.mean_evals)});
        }
      }
    }
    cmp.rows.push_back(row);
  }
  write_text(out_dir / "comparison.csv", format_csv(cmp), out);
  write_text(out_dir / "fig_comparison.csv", format_csv(cmp), out);

  {
    SvgPlot evals("Objective evaluations", "n", "mean evaluations", true);
    evals.add({"QWOA (4p)", fig_n, q_evals, {}, {}, true, true, false});
    SvgPlot probs("Measurement / solve probability", "n", "probability", true);
    probs.add({"QWOA 4-shot", fig_n, q_prob, q_lo, q_hi, true, true, false});
    for (const auto& [label, agg] :
         {std::pair{"steepest ascent", &steep}, std::pair{"first improvement", &first}}) {
      SvgPlot::Series e{label, {}, {}, {}, {}, true, true, false};
      SvgPlot::Series s{label, {}, {}, {}, {}, true, true, false};
      for (const auto& [n, a] : *agg) {
        e.x.push_back(n);
        e.y.push_back(a.mean_evals);
        s.x.push_back(n);
        s.y.push_back(a.p_solve);
        s.err_lo.push_back(a.ci.lo);
        s.err_hi.push_back(a.ci.hi);
      }
      if (!e.x.empty()) {
        evals.add(std::move(e));
        probs.add(std::move(s));
      }
    }
    write_text(out_dir / "fig_comparison_evals.svg", evals.render(), out);
    write_text(out_dir / "fig_comparison_probability.svg", probs.render(), out);
  }

  write_text(out_dir / "fig_typical_performance.csv", format_csv(typical), out);
  {
    SvgPlot plot("Typical measurement probability at fitted p", "n", "measurement probability",
                 true);
    plot.add({"median (IQR)", fig_n, t_med, t_q25, t_q75, true, true, false});
    plot.add({"unamplified M/2^n", fig_n, t_base, {}, {}, true, false, true});
    write_text(out_dir / "fig_typical_performance.svg", plot.render(), out);
  }

  // Sweep data per (n, p).
  CsvTable sweep{hash, {"n", "p", "instances", "mean", "ci_lo", "ci_hi"}, {}};
  SvgPlot sweep_plot("Mean measurement probability per depth", "p", "mean measurement probability");
  for (const auto& [n, by_p] : levels) {
    SvgPlot::Series s{"n=" + std::to_string(n), {}, {}, {}, {}, true, true, false};
    for (const auto& [p, st] : by_p) {
      sweep.rows.push_back({std::to_string(n), std::to_string(p), std::to_string(st.count),
                            fmt(st.mean), fmt(st.ci.lo), fmt(st.ci.hi)});
      s.x.push_back(p);
      s.y.push_back(st.mean);
      s.err_lo.push_back(st.ci.lo);
      s.err_hi.push_back(st.ci.hi);
    }
    sweep_plot.add(std::move(s));
  }
  if (!sweep.rows.empty()) {
    double p_first = 1e300, p_last = -1e300;
    for (const auto& [n, by_p] : levels) {
      p_first = std::min(p_first, static_cast<double>(by_p.begin()->first));
      p_last = std::max(p_last, static_cast<double>(by_p.rbegin()->first));
    }
    sweep_plot.add({"target", {p_first, p_last}, {in.config.target, in.config.target}, {}, {},
                    true, false, true});
  }
  write_text(out_dir / "fig_sweep.csv", format_csv(sweep), out);
  write_text(out_dir / "fig_sweep.svg", sweep_plot.render(), out);

  // Required iterations: p* with CI, fitted curve, Grover iterations at M = 2.
  CsvTable req{hash, {"n", "p_star", "ci_lo", "ci_hi", "fit", "grover_iterations_m2"}, {}};
  SvgPlot req_plot("Iterations for target probability", "n", "p", true);
  SvgPlot::Series ps{"QWOA p*", {}, {}, {}, {}, false, true, false};
  SvgPlot::Series fitted{"fit", {}, {}, {}, {}, true, false, false};
  SvgPlot::Series grover{"Grover (M=2)", {}, {}, {}, {}, true, true, true};
  std::set<int> req_sizes = sizes;
  for (const auto& r : in.pstar) req_sizes.insert(r.n);
  for (int n : req_sizes) {
    const PStarRow* row = nullptr;
    for (const auto& r : in.pstar) {
      if (r.n == n) row = &r;
    }
    const double fit_value = in.fit.predict(n);
    const int gp = grover_required_iterations(std::uint64_t{1} << n, 2, in.config.target);
    if (row && row->estimate) {
      const auto& e = *row->estimate;
      req.rows.push_back({std::to_string(n), fmt(e.p_star), fmt(e.ci.lo), fmt(e.ci.hi),
                          fmt(fit_value), std::to_string(gp)});
      ps.x.push_back(n);
      ps.y.push_back(e.p_star);
      ps.err_lo.push_back(e.ci.lo);
      ps.err_hi.push_back(e.ci.hi);
    } else {
      req.rows.push_back({std::to_string(n), kMissing, kMissing, kMissing, fmt(fit_value),
                          std::to_string(gp)});
    }
    fitted.x.push_back(n);
    fitted.y.push_back(fit_value);
    grover.x.push_back(n);
    grover.y.push_back(gp);
  }
  req_plot.add(std::move(ps));
  req_plot.add(std::move(fitted));
  req_plot.add(std::move(grover));
  write_text(out_dir / "fig_required_iterations.csv", format_csv(req), out);
  write_text(out_dir / "fig_required_iterations.svg", req_plot.render(), out);

  // Local optima census.
  nlohmann::ordered_json census_fit = nullptr;
  {
    CsvTable lo{hash, {"n", "instances", "median", "q25", "q75", "fit_median"}, {}};
    LocalOptimaCensus census;
    for (const auto& r : in.census) census.add(r.n, r.count);
    const auto medians = census.medians();
    std::optional<ExponentialFit> fit;
    if (medians.size() >= 3) {
      fit = fit_exponential_to_medians(medians);
      census_fit = {{"a", fit->a}, {"r", fit->r}, {"residual_norm", fit->residual_norm}};
    } else {
      out.warnings.push_back("local optima census has fewer than 3 sizes: no exponential fit");
    }
    SvgPlot plot("Local optima per instance", "n", "local optima", true);
    SvgPlot::Series med{"median (IQR)", {}, {}, {}, {}, false, true, false};
    SvgPlot::Series curve{"exponential fit", {}, {}, {}, {}, true, false, false};
    for (const auto& [n, counts] : census.per_size) {
      std::vector<double> v(counts.begin(), counts.end());
      const double f = fit ? (*fit)(n) : std::numeric_limits<double>::quiet_NaN();
      lo.rows.push_back({std::to_string(n), std::to_string(v.size()), fmt(median(v)),
                         fmt(quantile(v, 0.25)), fmt(quantile(v, 0.75)), fmt(f)});
      med.x.push_back(n);
      med.y.push_back(median(v));
      med.err_lo.push_back(quantile(v, 0.25));
      med.err_hi.push_back(quantile(v, 0.75));
      curve.x.push_back(n);
      curve.y.push_back(f);
    }
    if (in.census.empty()) out.warnings.push_back("no census input: local optima figure is empty");
    plot.add(std::move(med));
    plot.add(std::move(curve));
    write_text(out_dir / "fig_local_optima.csv", format_csv(lo), out);
    write_text(out_dir / "fig_local_optima.svg", plot.render(), out);
  }

  nlohmann::ordered_json summary;
  summary["config_hash"] = hash;
  summary["target"] = in.config.target;
  summary["fit"] = to_json(in.fit);
  summary["local_optima_fit"] = census_fit;
  summary["partial"] = out.partial;
  summary["warnings"] = out.warnings;
  auto files = out.files;
  files.push_back("summary.json");
  summary["files"] = files;
  write_text(out_dir / "summary.json", summary.dump(2) + "\n", out);
  return out;
}

} // namespace qwoa
