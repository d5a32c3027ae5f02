#include "qwoa/tables.hpp"

#include "qwoa/error.hpp"
#include "qwoa/text.hpp"

namespace qwoa {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw FormatError("CSV has no column '" + std::string(name) + "'");
}

std::string format_csv(const CsvTable& table) {
  std::string out = "# config_hash=" + table.config_hash + "\n";
  auto put_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += row[k];
    }
    out += '\n';
  };
  put_row(table.header);
  for (const auto& row : table.rows) put_row(row);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  for (auto line : split(text, '\n')) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto pos = line.find("config_hash=");
      if (pos != std::string_view::npos) table.config_hash = std::string(trim(line.substr(pos + 12)));
      continue;
    }
    std::vector<std::string> fields;
    for (auto f : split(line, ',')) fields.emplace_back(trim(f));
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.header.size()) throw FormatError("CSV row has wrong field count");
      table.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw FormatError("CSV has no header");
  if (table.config_hash.empty()) throw FormatError("CSV has no config_hash line");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path.string())); }

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  write_file(path.string(), format_csv(table));
}

CsvTable census_table(const std::string& hash, const std::vector<CensusRow>& rows) {
  CsvTable t{hash, {"n", "instance_id", "local_optima_count"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.instance_id), std::to_string(r.count)});
  }
  return t;
}

std::vector<CensusRow> census_rows(const CsvTable& t) {
  const auto cn = t.column("n"), ci = t.column("instance_id"), cc = t.column("local_optima_count");
  std::vector<CensusRow> out;
  for (const auto& row : t.rows) {
    out.push_back({static_cast<int>(parse_int(row[cn])), static_cast<int>(parse_int(row[ci])),
                   parse_u64(row[cc])});
  }
  return out;
}

CsvTable local_search_table(const std::string& hash, const std::vector<LocalSearchRow>& rows) {
  CsvTable t{hash,
             {"n", "instance_id", "variant", "runs", "p_solve", "ci_lo", "ci_hi", "mean_evals"},
             {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), std::to_string(r.instance_id),
                      std::string(to_string(r.variant)), std::to_string(r.runs),
                      format_double(r.p_solve), format_double(r.ci.lo), format_double(r.ci.hi),
                      format_double(r.mean_evals)});
  }
  return t;
}

std::vector<LocalSearchRow> local_search_rows(const CsvTable& t) {
  const auto cn = t.column("n"), ci = t.column("instance_id"), cv = t.column("variant"),
             cr = t.column("runs"), cp = t.column("p_solve"), clo = t.column("ci_lo"),
             chi = t.column("ci_hi"), ce = t.column("mean_evals");
  std::vector<LocalSearchRow> out;
  for (const auto& row : t.rows) {
    try {
      out.push_back({static_cast<int>(parse_int(row[cn])), static_cast<int>(parse_int(row[ci])),
                     parse_variant(row[cv]), parse_u64(row[cr]), parse_double(row[cp]),
                     {parse_double(row[clo]), parse_double(row[chi])}, parse_double(row[ce])});
    } catch (const InvalidArgument& e) {
      throw FormatError(e.what());
    }
  }
  return out;
}

CsvTable pstar_table(const std::string& hash, const std::vector<PStarRow>& rows) {
  CsvTable t{hash,
             {"n", "p_lo", "p_hi", "p_star", "ci_lo", "ci_hi", "bracketed", "at_boundary",
              "monotone"},
             {}};
  for (const auto& r : rows) {
    if (r.estimate) {
      const auto& e = *r.estimate;
      t.rows.push_back({std::to_string(r.n), std::to_string(e.p_lo), std::to_string(e.p_hi),
                        format_double(e.p_star), format_double(e.ci.lo), format_double(e.ci.hi),
                        "1", e.at_boundary ? "1" : "0", r.monotone ? "1" : "0"});
    } else {
      t.rows.push_back({std::to_string(r.n), "", "", "", "", "", "0", "0", r.monotone ? "1" : "0"});
    }
  }
  return t;
}

std::vector<PStarRow> pstar_rows(const CsvTable& t) {
  const auto cn = t.column("n"), clo = t.column("p_lo"), chi = t.column("p_hi"),
             cp = t.column("p_star"), cil = t.column("ci_lo"), cih = t.column("ci_hi"),
             cb = t.column("bracketed"), cab = t.column("at_boundary"), cm = t.column("monotone");
  std::vector<PStarRow> out;
  for (const auto& row : t.rows) {
    PStarRow r;
    r.n = static_cast<int>(parse_int(row[cn]));
    r.monotone = row[cm] == "1";
    if (row[cb] == "1") {
      PStarEstimate e;
      e.p_lo = static_cast<int>(parse_int(row[clo]));
      e.p_hi = static_cast<int>(parse_int(row[chi]));
      e.p_star = parse_double(row[cp]);
      e.ci = {parse_double(row[cil]), parse_double(row[cih])};
      e.at_boundary = row[cab] == "1";
      r.estimate = e;
    }
    out.push_back(r);
  }
  return out;
}

double FitFile::predict(double n) const {
  return model == "quadratic" ? quadratic(n) : exponential(n);
}

nlohmann::ordered_json to_json(const FitFile& fit) {
  nlohmann::ordered_json j;
  j["config_hash"] = fit.config_hash;
  j["model"] = fit.model;
  if (fit.model == "quadratic") {
    j["coefficients"] = {{"a", fit.quadratic.a}, {"b", fit.quadratic.b}, {"c", fit.quadratic.c}};
    j["residual_norm"] = fit.quadratic.residual_norm;
  } else {
    j["coefficients"] = {{"a", fit.exponential.a}, {"r", fit.exponential.r}};
    j["residual_norm"] = fit.exponential.residual_norm;
  }
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& [n, p] : fit.points) pts.push_back({{"n", n}, {"p_star", p}});
  return j;
}

FitFile read_fit(const std::filesystem::path& path) {
  try {
    const auto j = nlohmann::json::parse(read_file(path.string()));
    FitFile f;
    f.config_hash = j.at("config_hash").get<std::string>();
    f.model = j.at("model").get<std::string>();
    const auto& c = j.at("coefficients");
    if (f.model == "quadratic") {
      f.quadratic = {c.at("a").get<double>(), c.at("b").get<double>(), c.at("c").get<double>(),
                     j.at("residual_norm").get<double>()};
    } else if (f.model == "exponential") {
      f.exponential = {c.at("a").get<double>(), c.at("r").get<double>(),
                       j.at("residual_norm").get<double>()};
    } else {
      throw FormatError("unknown fit model '" + f.model + "'");
    }
    for (const auto& pt : j.at("points")) {
      f.points[pt.at("n").get<int>()] = pt.at("p_star").get<double>();
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad fit file: " + std::string(e.what()));
  }
}

} // namespace qwoa
