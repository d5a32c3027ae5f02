#include "qwoa/config.hpp"

#include <set>

#include "qwoa/error.hpp"
#include "qwoa/text.hpp"

namespace qwoa {

std::string_view to_string(CiMethod m) noexcept {
  return m == CiMethod::Normal ? "normal" : "bootstrap";
}

std::string RunConfig::canonical() const {
  std::string sizes;
  for (std::size_t k = 0; k < library.sizes.size(); ++k) {
    sizes += (k ? "," : "") + std::to_string(library.sizes[k]);
  }
  const auto& o = optimizer;
  const auto& s = o.settings;
  std::string out;
  auto put = [&out](std::string_view key, const std::string& value) {
    out.append(key).append("=").append(value).append("\n");
  };
  put("seed", std::to_string(library.seed));
  put("sizes", sizes);
  put("per_size", std::to_string(library.per_size));
  put("edge_prob", format_double(library.edge_prob));
  put("weight_dist", library.weight_dist);
  put("target", format_double(target));
  put("p_start", std::to_string(p_start));
  put("p_max", std::to_string(p_max));
  put("opt.x0", format_double(o.x0.gamma) + "," + format_double(o.x0.t) + "," +
                    format_double(o.x0.beta));
  put("opt.multistart", std::to_string(o.multistart));
  put("opt.multistart_seed", std::to_string(o.multistart_seed));
  put("opt.memory", std::to_string(s.memory));
  put("opt.max_iter", std::to_string(s.max_iterations));
  put("opt.pg_tol", format_double(s.pg_tolerance));
  put("opt.ftol_rel", format_double(s.ftol_relative));
  put("opt.fd_step", format_double(s.fd_relative_step));
  put("ci", std::string(to_string(ci)));
  put("ci.resamples", std::to_string(bootstrap_resamples));
  put("ci.seed", std::to_string(ci_seed));
  put("ls.runs", std::to_string(ls_runs));
  put("ls.seed", std::to_string(ls_seed));
  return out;
}

std::string RunConfig::hash() const { return to_hex(fnv1a64(canonical())); }

void RunConfig::validate() const {
  if (library.sizes.empty()) throw InvalidArgument("sizes must not be empty");
  for (int n : library.sizes) {
    if (n < 2 || n > kDefaultMaxQubits) throw InvalidArgument("sizes must lie in [2, 28]");
  }
  if (library.per_size < 1) throw InvalidArgument("per_size must be >= 1");
  if (!(library.edge_prob > 0.0 && library.edge_prob <= 1.0)) {
    throw InvalidArgument("edge_prob must lie in (0, 1]");
  }
  WeightDistribution::parse(library.weight_dist);
  if (!(target > 0.0 && target < 1.0)) throw InvalidArgument("target must lie in (0, 1)");
  if (p_start < 2 || p_max < p_start) throw InvalidArgument("need 2 <= p_start <= p_max");
  if (!optimizer.x0.within_bounds()) throw InvalidArgument("opt.x0 outside parameter bounds");
  if (optimizer.multistart < 1) throw InvalidArgument("opt.multistart must be >= 1");
  if (optimizer.settings.memory < 1 || optimizer.settings.max_iterations < 1) {
    throw InvalidArgument("optimizer memory and iteration cap must be >= 1");
  }
  if (bootstrap_resamples < 1) throw InvalidArgument("ci.resamples must be >= 1");
  if (ls_runs < 1) throw InvalidArgument("ls.runs must be >= 1");
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  try {
    if (key == "seed") c.library.seed = parse_u64(value);
    else if (key == "sizes") c.library.sizes = parse_size_list(value);
    else if (key == "per_size") c.library.per_size = static_cast<int>(parse_int(value));
    else if (key == "edge_prob") c.library.edge_prob = parse_double(value);
    else if (key == "weight_dist") c.library.weight_dist = WeightDistribution::parse(value).descriptor();
    else if (key == "target") c.target = parse_double(value);
    else if (key == "p_start") c.p_start = static_cast<int>(parse_int(value));
    else if (key == "p_max") c.p_max = static_cast<int>(parse_int(value));
    else if (key == "opt.x0") {
      const auto parts = split(value, ',');
      if (parts.size() != 3) throw InvalidArgument("opt.x0 needs gamma,t,beta");
      c.optimizer.x0 = {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
    } else if (key == "opt.multistart") c.optimizer.multistart = static_cast<int>(parse_int(value));
    else if (key == "opt.multistart_seed") c.optimizer.multistart_seed = parse_u64(value);
    else if (key == "opt.memory") c.optimizer.settings.memory = static_cast<int>(parse_int(value));
    else if (key == "opt.max_iter") c.optimizer.settings.max_iterations = static_cast<int>(parse_int(value));
    else if (key == "opt.pg_tol") c.optimizer.settings.pg_tolerance = parse_double(value);
    else if (key == "opt.ftol_rel") c.optimizer.settings.ftol_relative = parse_double(value);
    else if (key == "opt.fd_step") {
      c.optimizer.settings.fd_relative_step = parse_double(value);
      c.optimizer.settings.fd_min_step = c.optimizer.settings.fd_relative_step;
    } else if (key == "ci") {
      if (value == "normal") c.ci = CiMethod::Normal;
      else if (value == "bootstrap") c.ci = CiMethod::Bootstrap;
      else throw InvalidArgument("ci must be normal or bootstrap");
    } else if (key == "ci.resamples") c.bootstrap_resamples = static_cast<int>(parse_int(value));
    else if (key == "ci.seed") c.ci_seed = parse_u64(value);
    else if (key == "ls.runs") c.ls_runs = parse_u64(value);
    else if (key == "ls.seed") c.ls_seed = parse_u64(value);
    else throw InvalidArgument("unknown config key '" + std::string(key) + "'");
  } catch (const FormatError& e) {
    throw InvalidArgument("bad value for " + std::string(key) + ": " + e.what());
  }
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (!seen.emplace(key).second) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": repeated key " +
                            std::string(key));
    }
    apply_setting(config, key, line.substr(eq + 1));
  }
}

} // namespace qwoa
