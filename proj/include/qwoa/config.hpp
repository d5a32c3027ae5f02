#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qwoa/instances.hpp"
#include "qwoa/schedule.hpp"

namespace qwoa {

enum class CiMethod { Normal, Bootstrap };

/// Every setting that can change an output file. The thread cap and
/// output paths are deliberately absent: they never change results.
struct RunConfig {
  LibraryConfig library{1, {10, 11, 12, 13, 14, 15, 16}, 100, 0.5, "uniform"};
  double target = 0.10;
  int p_start = 2;
  int p_max = 40;
  OptimizerConfig optimizer{};
  CiMethod ci = CiMethod::Normal;
  int bootstrap_resamples = 10000;
  std::uint64_t ci_seed = 3;
  std::uint64_t ls_runs = 1000;
  std::uint64_t ls_seed = 2;

  /// One "key=value" line per setting, fixed order.
  [[nodiscard]] std::string canonical() const;
  /// Hex FNV-1a 64 of canonical().
  [[nodiscard]] std::string hash() const;
  void validate() const;
};

/// Applies one key/value pair using the config-file key names.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat config grammar, one setting per line:
///   line    := blank | comment | setting
///   comment := '#' anything
///   setting := key ws? '=' ws? value
/// Keys: seed sizes per_size edge_prob weight_dist target p_start p_max
///   opt.x0 (gamma,t,beta) opt.multistart opt.multistart_seed opt.memory
///   opt.max_iter opt.pg_tol opt.ftol_rel opt.fd_step ci (normal|bootstrap)
///   ci.resamples ci.seed ls.runs ls.seed
/// Unknown or repeated keys are errors.
void apply_config_text(RunConfig& config, std::string_view text);

std::string_view to_string(CiMethod m) noexcept;

} // namespace qwoa
