#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qwoa/bench.hpp"
#include "qwoa/error.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/qwoa_sim.hpp"
#include "qwoa/text.hpp"

using namespace qwoa;
namespace fs = std::filesystem;

namespace {

std::map<int, PLevelStats> curve(std::initializer_list<std::pair<int, double>> pts, double half = 0.01) {
  std::map<int, PLevelStats> m;
  for (auto [p, v] : pts) m[p] = {p, v, {v - half, v + half}, 100};
  return m;
}

ExperimentRecord sample_record() {
  ExperimentRecord r;
  r.config_hash = "00000000deadbeef";
  r.n = 10;
  r.instance_id = 3;
  r.p = 2;
  r.params = {1.25, 0.3, 0.1};
  r.expectation = 3.5;
  r.meas_prob = 0.0625;
  r.n_evals = 120;
  r.converged = true;
  r.optimum = 4.25;
  r.degeneracy = 2;
  return r;
}

} // namespace

TEST_CASE("p* interpolation") {
  CHECK(interpolate_p_star(curve({{2, 0.08}, {3, 0.12}}), 0.10).p_star == doctest::Approx(2.5).epsilon(1e-15));
  const auto exact = interpolate_p_star(curve({{3, 0.07}, {4, 0.10}}), 0.10);
  CHECK(exact.p_star == 4.0);
  CHECK(exact.p_lo == 3);
  CHECK(exact.p_hi == 4);

  // Linear mean curve 0.02 + 0.013 p crosses 0.1 at p = 80/13.
  std::map<int, PLevelStats> lin;
  for (int p = 2; p <= 9; ++p) {
    const double v = 0.02 + 0.013 * p;
    lin[p] = {p, v, {v - 0.005, v + 0.005}, 100};
  }
  const auto est = interpolate_p_star(lin, 0.10);
  CHECK(std::abs(est.p_star - 80.0 / 13.0) < 1e-12);
  CHECK(est.p_lo == 6);
  CHECK(est.p_hi == 7);
  // Shifted lines cross the target at p* -/+ 0.005/0.013.
  CHECK(std::abs(est.ci.lo - (80.0 / 13.0 - 0.005 / 0.013)) < 1e-12);
  CHECK(std::abs(est.ci.hi - (80.0 / 13.0 + 0.005 / 0.013)) < 1e-12);

  CHECK_THROWS_AS(interpolate_p_star(curve({{2, 0.03}, {3, 0.05}}), 0.10), InvalidArgument);
  CHECK_FALSE(estimate_p_star(curve({{2, 0.03}, {3, 0.05}}), 0.10).has_value());

  const auto boundary = estimate_p_star(curve({{2, 0.2}, {3, 0.3}}), 0.10);
  REQUIRE(boundary.has_value());
  CHECK(boundary->at_boundary);
  CHECK(boundary->p_star == 2.0);

  CHECK(is_monotone(curve({{2, 0.1}, {3, 0.1}, {4, 0.2}})));
  CHECK_FALSE(is_monotone(curve({{2, 0.1}, {3, 0.09}, {4, 0.2}})));
}

TEST_CASE("required-iteration fit") {
  std::map<int, double> pts;
  for (int n = 10; n <= 30; ++n) pts[n] = 0.019 * n * n + 0.053 * n - 0.092;
  const auto fit = fit_required_iterations(pts);
  CHECK(std::abs(fit.a - 0.019) < 1e-9);
  CHECK(std::abs(fit.b - 0.053) < 1e-9);
  CHECK(std::abs(fit.c + 0.092) < 1e-9);
  CHECK_THROWS_AS(fit_required_iterations({{10, 2.0}, {12, 3.0}}), InvalidArgument);

  const int p20 = round_half_up(0.019 * 400 + 0.053 * 20 - 0.092);
  CHECK(p20 == 9);
  CHECK(4 * p20 == 36);
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(2.4999) == 2);
}

TEST_CASE("four-shot probability") {
  CHECK(four_shot_probability(0.0) == 0.0);
  CHECK(four_shot_probability(1.0) == 1.0);
  CHECK(four_shot_probability(0.10) == doctest::Approx(0.3439).epsilon(1e-12));
  CHECK(four_shot_probability(0.5) == 0.9375);
  CHECK_THROWS_AS(four_shot_probability(1.5), InvalidArgument);

  Rng rng(12);
  int hits = 0;
  const int trials = 100000;
  for (int k = 0; k < trials; ++k) {
    bool any = false;
    for (int s = 0; s < 4; ++s) any = rng.bernoulli(0.1) || any;
    hits += any;
  }
  const double se = std::sqrt(0.3439 * 0.6561 / trials);
  CHECK(std::abs(hits / double(trials) - 0.3439) < 4 * se);
}

TEST_CASE("amplification") {
  CHECK(amplification(0.5, 2, 2) == 1.0);
  // 10% success at n = 31 with a two-fold degenerate optimum.
  CHECK(amplification(0.10, 2, 31) == doctest::Approx(1.073741824e8));
}

TEST_CASE("result records") {
  const auto r = sample_record();
  const auto line = to_jsonl(r);
  CHECK(line.rfind("{\"config_hash\":\"00000000deadbeef\",\"n\":10,\"instance\":3,\"p\":2,", 0) == 0);
  const auto back = parse_record(line);
  CHECK(to_jsonl(back) == line);
  CHECK_THROWS_AS(parse_record("{\"n\":1}"), FormatError);

  const auto path = fs::temp_directory_path() / "qwoa_unit_store.jsonl";
  fs::remove(path);
  {
    ResultStore store(path);
    std::vector<ExperimentRecord> rs{r};
    store.append(rs);
    CHECK(store.find(r.config_hash, 10, 3, 2) != nullptr);
    CHECK(store.find("other", 10, 3, 2) == nullptr);
  }
  { std::ofstream(path, std::ios::app) << "{\"config_hash\":\"00"; }  // torn tail
  ResultStore reopened(path);
  CHECK(reopened.records().size() == 1);
  auto r2 = r;
  r2.p = 3;
  std::vector<ExperimentRecord> more{r2};
  reopened.append(more);
  CHECK(read_results(path).size() == 2);
}

TEST_CASE("level summaries") {
  const std::vector<double> probs{0.1, 0.2, 0.3};
  const auto s = summarize_level(4, probs, CiMethod::Normal, 0, Rng(1));
  CHECK(s.mean == doctest::Approx(0.2));
  CHECK(s.count == 3);
  const auto b1 = summarize_level(4, probs, CiMethod::Bootstrap, 500, Rng(1));
  const auto b2 = summarize_level(4, probs, CiMethod::Bootstrap, 500, Rng(1));
  CHECK(b1.ci == b2.ci);
}

TEST_CASE("experiments on small instances") {
  Rng g(3);
  const auto graph = generate_instance(8, 0.5, WeightDistribution::uniform(), g).graph;
  const auto table = build_objective_table(graph);
  const auto rec = run_experiment(graph, 0, 2, OptimizerConfig{}, "h");
  CHECK(rec.meas_prob > static_cast<double>(table.degeneracy()) / 256.0);
  CHECK(rec.degeneracy == table.degeneracy());
  CHECK(rec.optimum == table.optimum);
  const auto again = run_experiment(graph, 0, 2, OptimizerConfig{}, "h");
  CHECK(to_jsonl(again) == to_jsonl(rec));
}

TEST_CASE("sweep brackets the target and resumes from the store") {
  RunConfig cfg;
  cfg.library = {4, {6}, 6, 0.5, "uniform"};
  cfg.optimizer.multistart = 1;
  const auto lib = generate_library(cfg.library);
  const auto path = fs::temp_directory_path() / "qwoa_unit_sweep.jsonl";
  fs::remove(path);

  // Unamplified baseline: met at the first swept level.
  cfg.target = 1e-9;
  fs::remove(fs::temp_directory_path() / "qwoa_unit_probe.jsonl");
  {
    ResultStore store(path);
    const auto s = run_sweep(lib, 6, cfg, store);
    REQUIRE(s.p_star.has_value());
    CHECK(s.p_star->at_boundary);
  }
  fs::remove(path);
  // Put the target halfway between the p = 2 and p = 3 means.
  {
    ResultStore probe(fs::temp_directory_path() / "qwoa_unit_probe.jsonl");
    const std::vector<int> levels{2, 3};
    const auto means = run_levels(lib, 6, levels, cfg, probe);
    REQUIRE(means.at(2).mean < means.at(3).mean);
    cfg.target = 0.5 * (means.at(2).mean + means.at(3).mean);
  }
  ResultStore store(path);
  const auto s = run_sweep(lib, 6, cfg, store);
  REQUIRE(s.bracketed());
  CHECK(s.p_star->p_lo == 2);
  CHECK(s.p_star->p_hi == 3);
  CHECK(s.p_star->p_star > s.p_star->p_lo);
  CHECK(s.p_star->p_star <= s.p_star->p_hi);
  const auto before = read_file(path.string());

  ResultStore resumed(path);
  const auto s2 = run_sweep(lib, 6, cfg, resumed);
  CHECK(read_file(path.string()) == before);
  CHECK(s2.p_star->p_star == s.p_star->p_star);

  cfg.target = 0.999;
  cfg.p_max = 3;
  ResultStore capped(path);
  CHECK_FALSE(run_sweep(lib, 6, cfg, capped).bracketed());
}
