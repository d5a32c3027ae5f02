#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qwoa/error.hpp"
#include "qwoa/landscape.hpp"
#include "qwoa/lbfgsb.hpp"
#include "qwoa/qwoa_sim.hpp"
#include "qwoa/schedule.hpp"

using namespace qwoa;

namespace {

const WeightedGraph kEdge(2, {{0, 1, 1.0}});

} // namespace

TEST_CASE("schedule ramps") {
  const auto s2 = expand_schedule({2.0, 0.6, 0.3}, 2, 0.5);
  CHECK(s2.gammas[0] == doctest::Approx(2.0 * 0.3 / 0.5));
  CHECK(s2.gammas[1] == doctest::Approx(2.0 / 0.5));
  CHECK(s2.times[0] == doctest::Approx(0.6));
  CHECK(s2.times[1] == doctest::Approx(0.6 * 0.3));

  const auto s3 = expand_schedule({2.0, 0.6, 0.5}, 3, 1.0);
  const double g[] = {1.0, 1.5, 2.0}, t[] = {0.6, 0.45, 0.3};
  for (int k = 0; k < 3; ++k) {
    CHECK(s3.gammas[k] == doctest::Approx(g[k]).epsilon(1e-15));
    CHECK(s3.times[k] == doctest::Approx(t[k]).epsilon(1e-15));
  }
  for (int p : {1, 4, 9}) {
    const auto z = expand_schedule({0.0, 0.0, 0.4}, p, 2.0);
    for (int k = 0; k < p; ++k) CHECK((z.gammas[k] == 0.0 && z.times[k] == 0.0));
  }
  const auto s1 = expand_schedule({1.0, 0.2, 0.1}, 1, 0.5);
  CHECK(s1.gammas == std::vector<double>{2.0});
  CHECK(s1.times == std::vector<double>{0.2});

  CHECK_THROWS_AS(expand_schedule({1.0, 0.2, 0.1}, 0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(expand_schedule({1.0, 0.2, 0.1}, 2, 0.0), InvalidArgument);
}

TEST_CASE("objective values") {
  const auto t = build_objective_table(kEdge);
  CHECK(qwoa_objective({0, 0, 0.2}, 3, t) == -t.mean);

  QwoaObjective f(t, 1);
  for (double g = 0; g <= 5; g += 0.5)
    for (double tt = 0; tt <= 0.7; tt += 0.1) {
      const double v = f({g, tt, 0.0});
      CHECK(v >= -t.optimum - 1e-12);
      CHECK(v <= -t.minimum + 1e-12);
    }
  CHECK(f.evaluations() == 11 * 8);
  CHECK_THROWS_AS(f({6.0, 0.1, 0.1}), InvalidArgument);

  // Central differences with halved steps agree to second order.
  auto slope = [&](double h) {
    return (qwoa_objective({1.3 + h, 0.4, 0.2}, 1, t) - qwoa_objective({1.3 - h, 0.4, 0.2}, 1, t)) /
           (2 * h);
  };
  const double d1 = slope(1e-3), d2 = slope(5e-4);
  CHECK(std::abs(d1 - d2) < 1e-6);
  const double one_sided = (qwoa_objective({1.3 + 1e-6, 0.4, 0.2}, 1, t) - qwoa_objective({1.3, 0.4, 0.2}, 1, t)) / 1e-6;
  CHECK(std::abs(one_sided - d2) < 1e-4);
}

TEST_CASE("box-constrained minimiser on analytic functions") {
  optim::Box box{Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1)};
  auto rosen = [](const Eigen::VectorXd& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const auto r = optim::minimize(rosen, Eigen::Vector2d(-0.5, 0.5), box);
  CHECK(r.converged());
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.value <= r.initial_value);

  // Minimum outside the box lands on the bound.
  auto bowl = [](const Eigen::VectorXd& x) { return std::pow(x[0] - 3, 2) + std::pow(x[1] + 0.25, 2); };
  const auto b = optim::minimize(bowl, Eigen::Vector2d(0, 0), box);
  CHECK(b.x[0] == 1.0);
  CHECK(b.x[1] == doctest::Approx(-0.25).epsilon(1e-4));

  std::uint64_t calls = 0;
  auto counted = [&](const Eigen::VectorXd& x) { ++calls; return bowl(x); };
  CHECK_THROWS_AS(optim::minimize(counted, Eigen::Vector2d(2, 0), box), InvalidArgument);
  CHECK(calls == 0);

  optim::Settings traced;
  traced.record_trace = true;
  auto nan_after = [&](const Eigen::VectorXd& x) { return x[0] > 0.5 ? std::nan("") : bowl(x); };
  try {
    optim::minimize(nan_after, Eigen::Vector2d(0, 0), box, traced);
    FAIL("expected NonFiniteObjective");
  } catch (const optim::NonFiniteObjective& e) {
    REQUIRE(!e.trace().empty());
    CHECK(std::isnan(e.trace().back().value));
  }
}

TEST_CASE("one-dimensional slice reaches a stationary point found by a dense grid") {
  const WeightedGraph g(4, {{0, 1, 0.7}, {1, 2, 0.4}, {2, 3, 0.9}, {0, 3, 0.2}, {0, 2, 0.5}});
  const auto table = build_objective_table(g);
  const double t_fixed = 0.35, beta_fixed = 0.25;
  auto slice = [&](double gamma) { return qwoa_objective({gamma, t_fixed, beta_fixed}, 2, table); };
  double best_gamma = 0, best = 1e300;
  for (int k = 0; k <= 50000; ++k) {
    const double gm = 5.0 * k / 50000;
    const double v = slice(gm);
    if (v < best) best = v, best_gamma = gm;
  }
  optim::Box box{Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 5.0)};
  // Start next to the grid minimum so the same basin is used.
  const auto r = optim::minimize([&](const Eigen::VectorXd& x) { return slice(x[0]); },
                                 Eigen::VectorXd::Constant(1, std::min(5.0, best_gamma + 0.05)), box);
  const double h = 1e-6;
  const double x = r.x[0];
  const double grad = (x + h <= 5.0 && x - h >= 0.0) ? (slice(x + h) - slice(x - h)) / (2 * h)
                      : (x + h > 5.0)                ? (slice(x) - slice(x - h)) / h
                                                     : (slice(x + h) - slice(x)) / h;
  const double pg = std::clamp(x - grad, 0.0, 5.0) - x;
  MESSAGE("stop: " << optim::to_string(r.status) << ", |pg| = " << std::abs(pg));
  CHECK(std::abs(pg) < 1e-5);
  CHECK(r.value <= best + 1e-9);
  CHECK(std::abs(r.x[0] - best_gamma) < 1e-3);
}

TEST_CASE("optimiser matches a grid search on the single edge") {
  const auto t = build_objective_table(kEdge);
  double grid_best = -1e300;
  for (int a = 0; a < 100; ++a)
    for (int b = 0; b < 100; ++b)
      for (int c = 0; c < 100; ++c) {
        const ScheduleParams x{5.0 * a / 99, 0.7 * b / 99, 0.5 * c / 99};
        grid_best = std::max(grid_best, -qwoa_objective(x, 1, t));
      }
  const auto res = optimize(t, 1, OptimizerConfig{});
  CHECK(res.expectation >= grid_best - 1e-3);
  CHECK(res.params.within_bounds());
  CHECK(res.n_evals > 0);
}

TEST_CASE("multistart counts every evaluation and is deterministic") {
  const WeightedGraph g(5, {{0, 1, 0.7}, {1, 2, 0.4}, {2, 3, 0.9}, {3, 4, 0.2}, {0, 4, 0.5}});
  const auto table = build_objective_table(g);
  OptimizerConfig cfg;
  cfg.settings.record_trace = true;
  const auto a = optimize(table, 2, cfg);
  const auto b = optimize(table, 2, cfg);
  CHECK(a.params == b.params);
  CHECK(a.n_evals == b.n_evals);
  CHECK(a.trace.size() == a.n_evals);
  CHECK(-a.expectation == doctest::Approx(qwoa_objective(a.params, 2, table)));

  cfg.multistart = 1;
  const auto single = optimize(table, 2, cfg);
  CHECK(single.n_evals < a.n_evals);
  CHECK(a.expectation >= single.expectation - 1e-12);

  const auto starts = latin_hypercube_starts(8, 1);
  CHECK(starts.size() == 8);
  for (const auto& s : starts) CHECK(s.within_bounds());

  cfg.x0 = {6.0, 0.1, 0.1};
  CHECK_THROWS_AS(optimize(table, 2, cfg), InvalidArgument);
}

TEST_CASE("trace lines") {
  const auto line = format_trace_jsonl({{1, {0.5, 0.25, 0.125}, -1.5}});
  CHECK(line == "{\"eval\":1,\"gamma\":0.5,\"t\":0.25,\"beta\":0.125,\"value\":-1.5}\n");
}
