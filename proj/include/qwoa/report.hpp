#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qwoa/bench.hpp"
#include "qwoa/config.hpp"
#include "qwoa/tables.hpp"

namespace qwoa {

struct ReportInputs {
  std::string config_hash;
  RunConfig config;  // CI method and target
  std::vector<ExperimentRecord> quantum;
  std::vector<LocalSearchRow> local_search;
  FitFile fit;  // p(n) for the comparison rows
  std::vector<CensusRow> census;
  std::vector<PStarRow> pstar;
};

struct ReportOutput {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  bool partial = false;
};

/// Writes into `out_dir`:
///   comparison.csv                per n at p = round(p(n)): 4-shot probability,
///                                 4p evaluations, amplification, Grover, and
///                                 local-search solve probability/evaluations
///   fig_local_optima.{csv,svg}    census distribution and exponential fit
///   fig_sweep.{csv,svg}           mean measurement probability per (n, p)
///   fig_required_iterations.{csv,svg}  p* with CI, fitted p(n), Grover p
///   fig_typical_performance.{csv,svg}  median/IQR at the fitted p, baseline M/2^n
///   fig_comparison.csv, fig_comparison_evals.svg, fig_comparison_probability.svg
///   summary.json                  hash, fits, warnings
ReportOutput comparison_report(const ReportInputs& inputs, const std::filesystem::path& out_dir);

} // namespace qwoa
