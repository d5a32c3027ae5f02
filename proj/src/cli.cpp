#include "qwoa/cli.hpp"

#include <chrono>
#include <ctime>
#include <iostream>
#include <mutex>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwoa/bench.hpp"
#include "qwoa/config.hpp"
#include "qwoa/error.hpp"
#include "qwoa/instances.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/local_search.hpp"
#include "qwoa/parallel.hpp"
#include "qwoa/report.hpp"
#include "qwoa/tables.hpp"
#include "qwoa/text.hpp"

#ifndef QWOA_VERSION
#define QWOA_VERSION "0.1.0"
#endif

namespace qwoa {

namespace fs = std::filesystem;

namespace {

class Unbracketed : public Error {
public:
  using Error::Error;
};

struct CommonFlags {
  std::string config_file;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sizes;
  std::optional<int> per_size;
  std::optional<double> edge_prob;
  std::optional<std::string> weight_dist;
  std::optional<double> target;
  std::optional<int> p_start;
  std::optional<int> p_max;
  std::optional<std::uint64_t> runs;
  std::vector<std::string> settings;  // --set key=value
};

/// Defaults, then the config file, then flags.
RunConfig resolve_config(const CommonFlags& f) {
  RunConfig c;
  if (!f.config_file.empty()) apply_config_text(c, read_file(f.config_file));
  for (const auto& kv : f.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value");
    apply_setting(c, trim(std::string_view(kv).substr(0, eq)), std::string_view(kv).substr(eq + 1));
  }
  if (f.seed) c.library.seed = *f.seed;
  if (f.sizes) c.library.sizes = parse_size_list(*f.sizes);
  if (f.per_size) c.library.per_size = *f.per_size;
  if (f.edge_prob) c.library.edge_prob = *f.edge_prob;
  if (f.weight_dist) c.library.weight_dist = WeightDistribution::parse(*f.weight_dist).descriptor();
  if (f.target) c.target = *f.target;
  if (f.p_start) c.p_start = *f.p_start;
  if (f.p_max) c.p_max = *f.p_max;
  if (f.runs) c.ls_runs = *f.runs;
  return c;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  const auto text = c.canonical();
  for (auto line : split(text, '\n')) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    j[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  return j;
}

class Manifest {
public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : command_(std::move(command)), args_(args), start_(std::chrono::steady_clock::now()) {}

  void write(const fs::path& path, const RunConfig& config, const std::string& hash,
             const nlohmann::ordered_json& extra = nlohmann::ordered_json::object()) const {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    nlohmann::ordered_json j;
    j["command"] = command_;
    j["args"] = args_;
    j["config_hash"] = hash;
    j["config"] = config_json(config);
    j["version"] = QWOA_VERSION;
    j["compiler"] = __VERSION__;
    j["finished_at_unix"] = static_cast<long long>(std::time(nullptr));
    j["elapsed_seconds"] = elapsed;
    j["details"] = extra;
    write_file(path.string(), j.dump(2) + "\n");
  }

private:
  std::string command_;
  std::vector<std::string> args_;
  std::chrono::steady_clock::time_point start_;
};

fs::path manifest_for_file(const fs::path& out) {
  return out.string() + ".manifest.json";
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw IoError("cannot create " + file.parent_path().string());
  }
}

RunConfig config_for_library(const CommonFlags& flags, const InstanceLibrary& lib) {
  auto c = resolve_config(flags);
  c.library = lib.config;
  c.validate();
  return c;
}

std::vector<const InstanceEntry*> select_instances(const InstanceLibrary& lib,
                                                   const std::optional<std::string>& sizes) {
  std::vector<const InstanceEntry*> out;
  std::vector<int> wanted;
  if (sizes) wanted = parse_size_list(*sizes);
  for (const auto& e : lib.instances) {
    if (wanted.empty() || std::find(wanted.begin(), wanted.end(), e.n) != wanted.end()) {
      out.push_back(&e);
    }
  }
  return out;
}

void require_same_hash(const std::string& expected, const std::string& got, const std::string& what) {
  if (!got.empty() && got != expected) {
    throw InvalidArgument("config hash mismatch: " + what + " has " + got + ", expected " + expected);
  }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark suite for the non-variational QWOA on weighted maxcut", "qwoa-bench"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::mutex log_mutex;
  auto log = [&](const std::string& msg) {
    std::lock_guard lock(log_mutex);
    err << msg << std::endl;
  };

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_file, "flat key=value config file");
    sub->add_option("--set", flags.settings, "override one config key (key=value)");
    sub->add_option("--threads", flags.threads, "worker threads (QWOA_THREADS caps this)");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance library");
  std::string gen_out;
  add_common(gen);
  gen->add_option("--sizes", flags.sizes, "sizes, e.g. 10..16");
  gen->add_option("--per-size", flags.per_size);
  gen->add_option("--seed", flags.seed);
  gen->add_option("--edge-prob", flags.edge_prob);
  gen->add_option("--weight-dist", flags.weight_dist, "uniform | uniform:a:b | const:w");
  gen->add_option("--out", gen_out, "library directory")->required();

  // census
  auto* census = app.add_subcommand("census", "count single-flip local optima");
  std::string census_lib, census_out;
  add_common(census);
  census->add_option("--library", census_lib)->required();
  census->add_option("--sizes", flags.sizes, "restrict to these sizes");
  census->add_option("--out", census_out)->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "adaptive p sweep to the target probability");
  std::string sweep_lib, sweep_out, sweep_n, sweep_levels, sweep_trace;
  add_common(sweep);
  sweep->add_option("--library", sweep_lib)->required();
  sweep->add_option("--n", sweep_n, "size(s) to sweep, e.g. 10 or 10..12")->required();
  sweep->add_option("--target", flags.target);
  sweep->add_option("--p-start", flags.p_start);
  sweep->add_option("--p-max", flags.p_max);
  sweep->add_option("--p", sweep_levels, "run exactly these p levels instead of searching");
  sweep->add_option("--trace-dir", sweep_trace, "write optimizer traces for one instance set");
  sweep->add_option("--out", sweep_out)->required();

  // interp
  auto* interp = app.add_subcommand("interp", "interpolate p* per size");
  std::string interp_in, interp_out;
  add_common(interp);
  interp->add_option("--results", interp_in)->required();
  interp->add_option("--target", flags.target);
  interp->add_option("--out", interp_out)->required();

  // fit
  auto* fit = app.add_subcommand("fit", "fit p*(n)");
  std::string fit_in, fit_out, fit_model = "quadratic";
  add_common(fit);
  fit->add_option("--pstar", fit_in)->required();
  fit->add_option("--model", fit_model)->check(CLI::IsMember({"quadratic", "exponential"}));
  fit->add_option("--out", fit_out)->required();

  // ls
  auto* ls = app.add_subcommand("ls", "local-search solve probabilities");
  std::string ls_lib, ls_out, ls_variant = "both";
  add_common(ls);
  ls->add_option("--library", ls_lib)->required();
  ls->add_option("--variant", ls_variant)->check(CLI::IsMember({"steepest", "firstimp", "both"}));
  ls->add_option("--runs", flags.runs);
  ls->add_option("--sizes", flags.sizes, "restrict to these sizes");
  ls->add_option("--out", ls_out)->required();

  // report
  auto* report = app.add_subcommand("report", "comparison tables and figure data");
  std::string rep_quantum, rep_fit, rep_census, rep_pstar, rep_out;
  std::vector<std::string> rep_ls;
  add_common(report);
  report->add_option("--quantum", rep_quantum)->required();
  report->add_option("--ls", rep_ls, "local-search CSV (repeatable)");
  report->add_option("--fit", rep_fit)->required();
  report->add_option("--census", rep_census);
  report->add_option("--pstar", rep_pstar);
  report->add_option("--out", rep_out)->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalidConfig;
  }

  try {
    if (gen->parsed()) {
      Manifest manifest("gen", args);
      auto config = resolve_config(flags);
      config.validate();
      const auto hash = config.hash();
      const auto lib = generate_library(config.library);
      int resamples = 0;
      for (const auto& inst : lib.instances) resamples += inst.resamples;
      save_library(lib, gen_out, {{"config_hash", hash}});
      manifest.write(fs::path(gen_out) / "run_manifest.json", config, hash,
                     {{"instances", lib.instances.size()}, {"zero_edge_resamples", resamples}});
      out << "wrote " << lib.instances.size() << " instances to " << gen_out << " (config "
          << hash << ", " << resamples << " zero-edge resamples)\n";
      return kExitOk;
    }

    if (census->parsed()) {
      Manifest manifest("census", args);
      const auto lib = load_library(census_lib);
      const auto config = config_for_library(flags, lib);
      const auto hash = config.hash();
      const auto chosen = select_instances(lib, flags.sizes);
      std::vector<CensusRow> rows(chosen.size());
      parallel_for(chosen.size(), resolve_thread_count(flags.threads), [&](std::size_t k) {
        const auto table = build_objective_table(chosen[k]->graph);
        rows[k] = {chosen[k]->n, chosen[k]->id, count_local_optima(table)};
      });
      ensure_parent(census_out);
      write_csv(census_out, census_table(hash, rows));
      manifest.write(manifest_for_file(census_out), config, hash);
      out << "census of " << rows.size() << " instances written to " << census_out << "\n";
      return kExitOk;
    }

    if (sweep->parsed()) {
      Manifest manifest("sweep", args);
      const auto lib = load_library(sweep_lib);
      const auto config = config_for_library(flags, lib);
      const auto hash = config.hash();
      ensure_parent(sweep_out);
      ResultStore store(sweep_out);
      SweepOptions options;
      options.threads = resolve_thread_count(flags.threads);
      nlohmann::ordered_json details = nlohmann::ordered_json::array();
      bool all_bracketed = true;
      for (int n : parse_size_list(sweep_n)) {
        options.on_level = [&](const PLevelStats& s) {
          log("n=" + std::to_string(n) + " p=" + std::to_string(s.p) + " mean=" +
              format_double(s.mean) + " ci=[" + format_double(s.ci.lo) + ", " +
              format_double(s.ci.hi) + "] instances=" + std::to_string(s.count));
        };
        if (!sweep_levels.empty()) {
          const auto levels = parse_size_list(sweep_levels);
          run_levels(lib, n, levels, config, store, options);
          details.push_back({{"n", n}, {"levels", levels}});
          continue;
        }
        const auto summary = run_sweep(lib, n, config, store, options);
        nlohmann::ordered_json d{{"n", n}, {"bracketed", summary.bracketed()},
                                 {"monotone", summary.monotone}};
        if (summary.p_star) {
          d["p_star"] = summary.p_star->p_star;
          d["at_boundary"] = summary.p_star->at_boundary;
          out << "n=" << n << " p*=" << format_double(summary.p_star->p_star)
              << (summary.p_star->at_boundary ? " (at boundary)" : "") << "\n";
        } else {
          all_bracketed = false;
          out << "n=" << n << " unbracketed up to p=" << config.p_max << "\n";
        }
        if (!summary.monotone) log("warning: mean measurement probability not monotone in p at n=" + std::to_string(n));
        details.push_back(d);
      }
      if (!sweep_trace.empty()) {
        // Traces for the first instance of each swept size at each stored p.
        fs::create_directories(sweep_trace);
        auto traced = config.optimizer;
        traced.settings.record_trace = true;
        for (int n : parse_size_list(sweep_n)) {
          const auto* inst = lib.of_size(n).front();
          const auto table = build_objective_table(inst->graph);
          for (const auto& r : store.records()) {
            if (r.n != n || r.instance_id != inst->id || r.config_hash != hash) continue;
            const auto res = optimize(table, r.p, traced);
            write_file((fs::path(sweep_trace) / ("trace_n" + std::to_string(n) + "_i" +
                                                  std::to_string(inst->id) + "_p" +
                                                  std::to_string(r.p) + ".jsonl"))
                           .string(),
                       format_trace_jsonl(res.trace));
          }
        }
      }
      manifest.write(manifest_for_file(sweep_out), config, hash, details);
      if (!all_bracketed) throw Unbracketed("sweep did not bracket the target for every size");
      return kExitOk;
    }

    if (interp->parsed()) {
      Manifest manifest("interp", args);
      auto config = resolve_config(flags);
      const auto records = read_results(interp_in);
      if (records.empty()) throw InvalidArgument("results file is empty");
      const auto hash = records.front().config_hash;
      for (const auto& r : records) require_same_hash(hash, r.config_hash, interp_in);
      std::vector<PStarRow> rows;
      for (const auto& [n, per_p] : summarize_results(records, config)) {
        rows.push_back({n, estimate_p_star(per_p, config.target), is_monotone(per_p)});
      }
      ensure_parent(interp_out);
      write_csv(interp_out, pstar_table(hash, rows));
      manifest.write(manifest_for_file(interp_out), config, hash);
      bool all = true;
      for (const auto& r : rows) all = all && r.estimate.has_value();
      out << "p* for " << rows.size() << " sizes written to " << interp_out << "\n";
      if (!all) throw Unbracketed("some sizes have no bracketing p levels");
      return kExitOk;
    }

    if (fit->parsed()) {
      Manifest manifest("fit", args);
      const auto table = read_csv(fit_in);
      FitFile f;
      f.config_hash = table.config_hash;
      f.model = fit_model;
      for (const auto& r : pstar_rows(table)) {
        if (r.estimate) f.points[r.n] = r.estimate->p_star;
      }
      std::vector<double> x, y;
      for (const auto& [n, p] : f.points) {
        x.push_back(n);
        y.push_back(p);
      }
      if (fit_model == "quadratic") {
        f.quadratic = fit_required_iterations(f.points);
      } else {
        f.exponential = fit_exponential(x, y);
      }
      ensure_parent(fit_out);
      write_file(fit_out, to_json(f).dump(2) + "\n");
      manifest.write(manifest_for_file(fit_out), resolve_config(flags), f.config_hash);
      out << "fit written to " << fit_out << "\n";
      return kExitOk;
    }

    if (ls->parsed()) {
      Manifest manifest("ls", args);
      const auto lib = load_library(ls_lib);
      const auto config = config_for_library(flags, lib);
      const auto hash = config.hash();
      std::vector<LocalSearchVariant> variants;
      if (ls_variant != "firstimp") variants.push_back(LocalSearchVariant::SteepestAscent);
      if (ls_variant != "steepest") variants.push_back(LocalSearchVariant::FirstImprovement);
      const auto chosen = select_instances(lib, flags.sizes);
      std::vector<LocalSearchRow> rows(chosen.size() * variants.size());
      parallel_for(chosen.size(), resolve_thread_count(flags.threads), [&](std::size_t k) {
        const auto& inst = *chosen[k];
        const auto table = build_objective_table(inst.graph);
        const LocalSearch search(inst.graph, table.optimum);
        for (std::size_t v = 0; v < variants.size(); ++v) {
          const Rng rng = Rng(config.ls_seed)
                              .child(static_cast<std::uint64_t>(inst.n))
                              .child(static_cast<std::uint64_t>(inst.id))
                              .child(static_cast<std::uint64_t>(variants[v]));
          const auto est = estimate_solve_probability(search, variants[v], config.ls_runs, rng);
          rows[k * variants.size() + v] = {inst.n,      inst.id,    variants[v],   est.runs,
                                           est.p_solve, est.ci95,   est.mean_evals};
        }
      });
      ensure_parent(ls_out);
      write_csv(ls_out, local_search_table(hash, rows));
      manifest.write(manifest_for_file(ls_out), config, hash);
      out << rows.size() << " local-search rows written to " << ls_out << "\n";
      return kExitOk;
    }

    if (report->parsed()) {
      Manifest manifest("report", args);
      ReportInputs in;
      in.config = resolve_config(flags);
      in.quantum = read_results(rep_quantum);
      if (in.quantum.empty()) throw InvalidArgument("quantum results are empty");
      in.config_hash = in.quantum.front().config_hash;
      for (const auto& r : in.quantum) require_same_hash(in.config_hash, r.config_hash, rep_quantum);
      for (const auto& path : rep_ls) {
        const auto table = read_csv(path);
        require_same_hash(in.config_hash, table.config_hash, path);
        for (const auto& r : local_search_rows(table)) in.local_search.push_back(r);
      }
      in.fit = read_fit(rep_fit);
      require_same_hash(in.config_hash, in.fit.config_hash, rep_fit);
      if (in.fit.model != "quadratic") log("warning: report uses a non-quadratic p(n) fit");
      if (!rep_census.empty()) {
        const auto table = read_csv(rep_census);
        require_same_hash(in.config_hash, table.config_hash, rep_census);
        in.census = census_rows(table);
      }
      if (!rep_pstar.empty()) {
        const auto table = read_csv(rep_pstar);
        require_same_hash(in.config_hash, table.config_hash, rep_pstar);
        in.pstar = pstar_rows(table);
      }
      const auto result = comparison_report(in, rep_out);
      for (const auto& w : result.warnings) log("warning: " + w);
      manifest.write(fs::path(rep_out) / "run_manifest.json", in.config, in.config_hash,
                     {{"files", result.files}, {"partial", result.partial}});
      out << "report with " << result.files.size() << " files written to " << rep_out << "\n";
      return kExitOk;
    }
  } catch (const Unbracketed& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnbracketed;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

} // namespace qwoa
