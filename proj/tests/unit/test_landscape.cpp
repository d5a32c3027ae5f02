#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "oracles.hpp"
#include "qwoa/error.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/rng.hpp"

using namespace qwoa;

TEST_CASE("single edge table") {
  const auto t = build_objective_table(WeightedGraph(2, {{0, 1, 1.0}}));
  CHECK(t.values == std::vector<double>{0, 1, 1, 0});
  CHECK(t.sigma == 0.5);
  CHECK(t.mean == 0.5);
  CHECK(t.optimum == 1.0);
  CHECK(t.optima == std::vector<std::uint64_t>{1, 2});
  CHECK(t.degeneracy() == 2);
  CHECK(count_local_optima(t) == 2);
}

TEST_CASE("triangle table") {
  const auto t = build_objective_table(WeightedGraph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}}));
  CHECK(t.values == std::vector<double>{0, 2, 2, 2, 2, 2, 2, 0});
  CHECK(t.optimum == 2.0);
  CHECK(t.degeneracy() == 6);
}

TEST_CASE("path graph local optima") {
  const auto t = build_objective_table(WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
  CHECK(local_optima(t) == std::vector<std::uint64_t>{0b010, 0b101});
}

TEST_CASE("tables match the brute-force enumerator") {
  for (int n : {4, 7, 10, 12}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      Rng rng = Rng(100 + s).child(static_cast<std::uint64_t>(n));
      const auto g = generate_instance(n, 0.5, WeightDistribution::uniform(), rng).graph;
      const auto t = build_objective_table(g);
      const auto bf = oracle::enumerate(g);
      const auto cuts = oracle::brute_force_cuts(g);
      for (std::size_t b = 0; b < cuts.size(); ++b) REQUIRE(t.values[b] == doctest::Approx(cuts[b]).epsilon(1e-12));
      CHECK(t.optimum == doctest::Approx(bf.optimum).epsilon(1e-14));
      CHECK(t.degeneracy() == bf.degeneracy);
      CHECK(count_local_optima(t) == bf.local_optima);
      for (std::size_t b = 0; b < t.size(); ++b) REQUIRE(t.values[b] == t.values[t.size() - 1 - b]);
      CHECK(t.degeneracy() % 2 == 0);
    }
  }
}

TEST_CASE("capacity and dumps") {
  const WeightedGraph g(5, {{0, 4, 0.3}, {1, 2, 0.9}});
  CHECK_THROWS_AS(build_objective_table(g, 4), CapacityError);
  const auto t = build_objective_table(g);
  const auto path = std::filesystem::temp_directory_path() / "qwoa_unit_table.bin";
  write_table_dump(t, path);
  CHECK(read_table_dump(path) == t.values);
  CHECK(cut_value(g, 0b10001) == 0.0);
  CHECK(cut_value(g, 0b00001) == 0.3);
}

TEST_CASE("exponential fit to medians") {
  std::map<int, double> medians;
  for (int n = 10; n <= 20; ++n) medians[n] = 2.0 * std::pow(1.5, n);
  const auto fit = fit_exponential_to_medians(medians);
  CHECK(std::abs(fit.a / 2 - 1) < 1e-9);
  CHECK(std::abs(fit.r / 1.5 - 1) < 1e-9);
  CHECK_THROWS_AS(fit_exponential_to_medians({{10, 4.0}}), InvalidArgument);

  LocalOptimaCensus census;
  census.add(10, 3);
  census.add(10, 5);
  census.add(10, 100);
  CHECK(census.medians().at(10) == 5.0);
}

TEST_CASE("census medians grow with n on generated instances") {
  LocalOptimaCensus census;
  LibraryConfig cfg{1, {10, 11, 12, 13, 14}, 15, 0.5, "uniform"};
  for (const auto& inst : generate_library(cfg).instances) {
    census.add(inst.n, count_local_optima(build_objective_table(inst.graph)));
  }
  const auto fit = fit_exponential_to_medians(census.medians());
  CHECK(fit.r > 1.0);
}

TEST_CASE("isolated top vertex keeps its ties") {
  // Vertex 6 has no edges; the mirrored half of the table reaches C_b and
  // C_{b ^ 64} through different sums.
  const WeightedGraph g(7, {{0, 1, 0.57148049974214932},
                            {0, 5, 0.038540759053616758},
                            {1, 3, 0.98384952956383798},
                            {2, 5, 0.31966705754948277},
                            {3, 4, 0.96362323368592462}});
  const auto t = build_objective_table(g);
  const auto bf = oracle::enumerate(g);
  CHECK(count_local_optima(t) == bf.local_optima);
  CHECK(t.degeneracy() == bf.degeneracy);
}
