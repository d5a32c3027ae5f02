#include <doctest.h>

#include "qwoa/config.hpp"
#include "qwoa/error.hpp"
#include "qwoa/tables.hpp"

using namespace qwoa;

TEST_CASE("config defaults, parsing and hashing") {
  RunConfig a;
  a.validate();
  CHECK(a.library.sizes == std::vector<int>{10, 11, 12, 13, 14, 15, 16});
  CHECK(a.hash().size() == 16);

  RunConfig b;
  apply_config_text(b, "# comment\n\nseed = 1\nsizes=10..16\n");
  CHECK(b.hash() == a.hash());

  RunConfig c;
  apply_config_text(c, "target=0.2\nopt.x0=1,0.2,0.1\nci=bootstrap\n");
  CHECK(c.target == 0.2);
  CHECK(c.optimizer.x0 == ScheduleParams{1, 0.2, 0.1});
  CHECK(c.ci == CiMethod::Bootstrap);
  CHECK(c.hash() != a.hash());

  RunConfig d;
  CHECK_THROWS_AS(apply_config_text(d, "colour=blue\n"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_text(d, "seed=1\nseed=2\n"), InvalidArgument);
  CHECK_THROWS_AS(apply_config_text(d, "seed\n"), InvalidArgument);
  RunConfig e;
  e.target = 1.5;
  CHECK_THROWS_AS(e.validate(), InvalidArgument);
  e.target = 0.1;
  e.p_start = 1;
  CHECK_THROWS_AS(e.validate(), InvalidArgument);
}

TEST_CASE("csv tables carry the hash") {
  const auto t = census_table("abc", {{10, 0, 7}, {10, 1, 9}});
  const auto text = format_csv(t);
  CHECK(text.rfind("# config_hash=abc\nn,instance_id,local_optima_count\n", 0) == 0);
  const auto back = parse_csv(text);
  CHECK(back.config_hash == "abc");
  CHECK(census_rows(back)[1].count == 9);
  CHECK_THROWS_AS(parse_csv("n,x\n1,2\n"), FormatError);
  CHECK_THROWS_AS(parse_csv("# config_hash=a\nn,x\n1\n"), FormatError);

  std::vector<LocalSearchRow> ls{{12, 4, LocalSearchVariant::FirstImprovement, 100, 0.25, {0.1, 0.4}, 33.5}};
  const auto lrows = local_search_rows(parse_csv(format_csv(local_search_table("h", ls))));
  CHECK(lrows[0].variant == LocalSearchVariant::FirstImprovement);
  CHECK(lrows[0].ci == Interval{0.1, 0.4});

  std::vector<PStarRow> ps{{10, PStarEstimate{2.5, {2.1, 2.9}, 2, 3, false}, true}, {11, std::nullopt, false}};
  const auto prows = pstar_rows(parse_csv(format_csv(pstar_table("h", ps))));
  REQUIRE(prows[0].estimate.has_value());
  CHECK(prows[0].estimate->p_star == 2.5);
  CHECK_FALSE(prows[1].estimate.has_value());
  CHECK_FALSE(prows[1].monotone);
}
