#include "qwoa/instances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwoa/error.hpp"
#include "qwoa/text.hpp"

namespace qwoa {

namespace fs = std::filesystem;

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw InvalidArgument("graph needs at least one vertex");
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n || e.i == e.j) {
      throw InvalidArgument("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                            ") violates 0 <= i < j < n");
    }
    if (!std::isfinite(e.w) || e.w <= 0.0) {
      throw InvalidArgument("edge weight must be finite and > 0");
    }
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw InvalidArgument("duplicate edge");
    }
  }
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("scale must be > 0");
  auto edges = edges_;
  for (auto& e : edges) e.w *= factor;
  return {n_, std::move(edges)};
}

WeightDistribution WeightDistribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw InvalidArgument("uniform weights need 0 <= lo < hi");
  }
  return {Kind::Uniform, lo, hi};
}

WeightDistribution WeightDistribution::constant(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("constant weight must be > 0");
  return {Kind::Constant, w, w};
}

WeightDistribution WeightDistribution::parse(std::string_view descriptor) {
  const auto parts = split(trim(descriptor), ':');
  try {
    if (parts[0] == "uniform") {
      if (parts.size() == 1) return uniform();
      if (parts.size() == 3) return uniform(parse_double(parts[1]), parse_double(parts[2]));
    } else if (parts[0] == "const" && parts.size() == 2) {
      return constant(parse_double(parts[1]));
    }
  } catch (const FormatError&) {
  }
  throw InvalidArgument("unsupported weight distribution '" + std::string(descriptor) + "'");
}

std::string WeightDistribution::descriptor() const {
  if (kind_ == Kind::Constant) return "const:" + format_double(a_);
  if (a_ == 0.0 && b_ == 1.0) return "uniform";
  return "uniform:" + format_double(a_) + ":" + format_double(b_);
}

double WeightDistribution::sample(Rng& rng) const {
  if (kind_ == Kind::Constant) return a_;
  // a + (b-a)*u with u in (0,1]; u = 1 lands exactly on b.
  const double w = a_ + (b_ - a_) * rng.uniform_open_closed();
  return w > a_ ? w : std::nextafter(a_, b_);
}

GeneratedInstance generate_instance(int n, double edge_prob, const WeightDistribution& weights,
                                    Rng& rng) {
  if (n < 2) throw InvalidArgument("instances need n >= 2");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) {
    throw InvalidArgument("edge probability must lie in (0, 1]");
  }
  int resamples = 0;
  while (true) {
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(edge_prob)) edges.push_back({i, j, 0.0});
      }
    }
    if (edges.empty()) {
      ++resamples;
      continue;
    }
    for (auto& e : edges) e.w = weights.sample(rng);
    return {WeightedGraph(n, std::move(edges)), resamples};
  }
}

std::vector<const InstanceEntry*> InstanceLibrary::of_size(int n) const {
  std::vector<const InstanceEntry*> out;
  for (const auto& e : instances) {
    if (e.n == n) out.push_back(&e);
  }
  return out;
}

GeneratedInstance regenerate_instance(const LibraryConfig& config, int n, int id) {
  Rng rng = Rng(config.seed).child(static_cast<std::uint64_t>(n)).child(static_cast<std::uint64_t>(id));
  return generate_instance(n, config.edge_prob, WeightDistribution::parse(config.weight_dist), rng);
}

namespace {

std::string instance_relpath(int n, int id) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "n%02d/inst_%04d.txt", n, id);
  return buf;
}

} // namespace

InstanceLibrary generate_library(const LibraryConfig& config) {
  if (config.per_size < 1) throw InvalidArgument("per_size must be >= 1");
  WeightDistribution::parse(config.weight_dist);
  InstanceLibrary lib{config, {}};
  for (int n : config.sizes) {
    for (int id = 0; id < config.per_size; ++id) {
      auto gen = regenerate_instance(config, n, id);
      auto text = format_instance(gen.graph);
      lib.instances.push_back({n, id, instance_relpath(n, id), instance_checksum(text),
                               gen.resamples, std::move(gen.graph)});
    }
  }
  return lib;
}

std::string format_instance(const WeightedGraph& graph) {
  std::string out = "maxcut v1 n=" + std::to_string(graph.num_vertices()) +
                    " m=" + std::to_string(graph.num_edges()) + "\n";
  for (const auto& e : graph.edges()) {
    out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + format_double(e.w) + "\n";
  }
  out += "checksum=" + to_hex(fnv1a64(out)) + "\n";
  return out;
}

std::string instance_checksum(std::string_view text) {
  const auto pos = text.rfind("checksum=");
  if (pos == std::string_view::npos) throw FormatError("instance has no checksum line");
  return std::string(trim(text.substr(pos + 9)));
}

WeightedGraph parse_instance(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw FormatError("empty instance file");

  const auto header = split(lines[0], ' ');
  if (header.size() != 4 || header[0] != "maxcut" || header[1] != "v1" ||
      !header[2].starts_with("n=") || !header[3].starts_with("m=")) {
    throw FormatError("bad instance header: '" + std::string(lines[0]) + "'");
  }
  const auto n = parse_int(header[2].substr(2));
  const auto m = parse_int(header[3].substr(2));
  if (n < 1 || m < 0) throw FormatError("bad instance header counts");
  if (lines.size() != static_cast<std::size_t>(m) + 2) {
    throw FormatError("instance truncated or padded: expected " + std::to_string(m) +
                      " edges");
  }
  const auto& last = lines.back();
  if (!last.starts_with("checksum=")) throw FormatError("missing checksum line");

  const auto body_len = static_cast<std::size_t>(last.data() - text.data());
  const auto expected = to_hex(fnv1a64(text.substr(0, body_len)));
  if (trim(last.substr(9)) != expected) throw FormatError("instance checksum mismatch");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (std::size_t k = 1; k + 1 < lines.size(); ++k) {
    const auto fields = split(lines[k], ' ');
    if (fields.size() != 3) throw FormatError("bad edge line: '" + std::string(lines[k]) + "'");
    edges.push_back({static_cast<int>(parse_int(fields[0])), static_cast<int>(parse_int(fields[1])),
                     parse_double(fields[2])});
  }
  try {
    return WeightedGraph(static_cast<int>(n), std::move(edges));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid instance: ") + e.what());
  }
}

void save_instance(const WeightedGraph& graph, const fs::path& path) {
  write_file(path.string(), format_instance(graph));
}

WeightedGraph load_instance(const fs::path& path) {
  return parse_instance(read_file(path.string()));
}

void save_library(const InstanceLibrary& library, const fs::path& dir,
                  const nlohmann::json& metadata) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  nlohmann::json manifest;
  manifest["format"] = "maxcut-library";
  manifest["schema_version"] = kLibrarySchemaVersion;
  manifest["seed"] = library.config.seed;
  manifest["sizes"] = library.config.sizes;
  manifest["per_size"] = library.config.per_size;
  manifest["edge_prob"] = library.config.edge_prob;
  manifest["weight_dist"] = library.config.weight_dist;
  manifest["metadata"] = metadata;
  auto& list = manifest["instances"] = nlohmann::json::array();
  for (const auto& inst : library.instances) {
    const auto path = dir / inst.path;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string());
    const auto text = format_instance(inst.graph);
    write_file(path.string(), text);
    list.push_back({{"n", inst.n},
                    {"id", inst.id},
                    {"path", inst.path},
                    {"checksum", instance_checksum(text)},
                    {"resamples", inst.resamples}});
  }
  write_file((dir / kLibraryManifestName).string(), manifest.dump(2) + "\n");
}

nlohmann::json load_library_metadata(const fs::path& dir) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file((dir / kLibraryManifestName).string()));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("library manifest is not valid JSON: " + std::string(e.what()));
  }
  if (manifest.value("format", "") != "maxcut-library") {
    throw FormatError("not a maxcut library manifest");
  }
  if (manifest.value("schema_version", -1) != kLibrarySchemaVersion) {
    throw FormatError("library schema version mismatch");
  }
  return manifest;
}

InstanceLibrary load_library(const fs::path& dir) {
  const auto manifest = load_library_metadata(dir);
  InstanceLibrary lib{};
  try {
    lib.config.seed = manifest.at("seed").get<std::uint64_t>();
    lib.config.sizes = manifest.at("sizes").get<std::vector<int>>();
    lib.config.per_size = manifest.at("per_size").get<int>();
    lib.config.edge_prob = manifest.at("edge_prob").get<double>();
    lib.config.weight_dist = manifest.at("weight_dist").get<std::string>();
    for (const auto& item : manifest.at("instances")) {
      const auto rel = item.at("path").get<std::string>();
      const auto text = read_file((dir / rel).string());
      auto graph = parse_instance(text);
      const auto checksum = item.at("checksum").get<std::string>();
      if (checksum != instance_checksum(text)) {
        throw FormatError("manifest checksum mismatch for " + rel);
      }
      const int n = item.at("n").get<int>();
      if (graph.num_vertices() != n) throw FormatError("vertex count mismatch for " + rel);
      lib.instances.push_back(
          {n, item.at("id").get<int>(), rel, checksum, item.value("resamples", 0), std::move(graph)});
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("library manifest schema error: " + std::string(e.what()));
  }
  return lib;
}

} // namespace qwoa
