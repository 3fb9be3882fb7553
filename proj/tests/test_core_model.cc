#include "doctest.h"
#include "stg2/core_model.h"
#include "stg2/wavelength_set.h"
#include "support/fixtures.h"

using namespace stg2;
using namespace stg2::testing;

TEST_CASE("scenario universe sizes") {
  CHECK(scenario_universe(8) == ScenarioCounts{1, 8, 56});
  CHECK(scenario_universe(8).total() == 65);
  CHECK(scenario_universe(1) == ScenarioCounts{1, 1, 0});
  for (int64_t n = 1; n <= 100; ++n) {
    ScenarioCounts c = scenario_universe(n);
    CHECK(c.working == 1);
    CHECK(c.level1 == n);
    CHECK(c.level2 == n * n - n);
  }
  CHECK_THROWS_AS(scenario_universe(0), std::invalid_argument);
}

TEST_CASE("scenario levels and dense index") {
  CHECK(Scenario::Working().level() == 0);
  CHECK(Scenario::Level1(3).level() == 1);
  CHECK(Scenario::Level2(3, 4).level() == 2);
  CHECK_FALSE(Scenario::Level2(3, 3).valid());
  CHECK_FALSE(Scenario{kNoLink, 2}.valid());
  CHECK(Scenario::Level2(3, 4).fails(4));
  CHECK_FALSE(Scenario::Working().fails(kNoLink));
  for (int e1 = 0; e1 < 7; ++e1) {
    for (int e2 = 0; e2 < 7; ++e2) {
      Scenario s = Scenario::Level2(e1, e2);
      CHECK(Scenario::FromIndex(s.index(7), 7) == s);
    }
  }
  CHECK(to_string(Scenario::Level2(2, 5)) == "(2,5)");
}

TEST_CASE("wavelength set operations") {
  WavelengthSet w = WavelengthSet::All(8);
  CHECK(w.size() == 8);
  CHECK(w.min() == 0);
  w.erase(0);
  w.erase(1);
  CHECK(w.min() == 2);
  WavelengthSet v;
  CHECK(v.empty());
  CHECK(v.min() == -1);
  v.insert(5);
  v.insert(200);
  CHECK((w & v).size() == 1);
  CHECK((v - w).contains(200));
  CHECK(v.is_subset_of(WavelengthSet::All(256)));
  CHECK_FALSE(v.is_subset_of(w));
}

TEST_CASE("lightpath node sequence is derived from its links") {
  NetworkInstance inst = five_node_instance();
  Lightpath l3 = make_lightpath(inst, 2, 0, {AD, CD});
  CHECK(l3.nodes == std::vector<int>{A, D, C});
  CHECK(l3.length_km == 400);
  CHECK(l3.other_end(A) == C);
  CHECK(l3.traverses(CD));
  Lightpath rev = make_lightpath(inst, 9, 1, {CD, AD});
  CHECK(rev.nodes == std::vector<int>{C, D, A});

  CHECK_THROWS_AS(make_lightpath(inst, 0, 0, {AB, CD}), StructuralError);
  CHECK_THROWS_AS(make_lightpath(inst, 0, 0, {AD, DE, BE}), StructuralError);
  CHECK_THROWS_AS(make_lightpath(inst, 0, 2, {AC}), StructuralError);
  CHECK_THROWS_AS(make_lightpath(inst, 0, 0, {}), StructuralError);
  // A -> C -> D -> A returns to its start.
  CHECK_THROWS_AS(make_lightpath(inst, 0, 0, {AC, CD, AD}), StructuralError);
}

TEST_CASE("route shape, elementarity and failed links") {
  NetworkInstance inst = five_node_instance();
  Solution s = sample_solution(inst);
  LightpathTable table(s.lightpaths);

  RouteShape work = route_shape({0, 1}, table);
  CHECK(work.source == A);
  CHECK(work.target == E);
  CHECK(work.nodes == std::vector<int>{A, C, E});
  CHECK(route_is_elementary({0, 1}, table));

  // (l3, l4) goes A D C D E: it visits D twice.
  CHECK_FALSE(route_is_elementary({2, 3}, table));
  CHECK(route_avoids({2, 3}, table, Scenario::Level2(AC, CE)));
  CHECK_FALSE(route_avoids({2, 1}, table, Scenario::Level2(AC, CE)));
  CHECK(route_links({2, 3}, table) == std::vector<int>{AD, CD, DE});

  CHECK_THROWS_AS(route_shape({0, 1, 2}, table), StructuralError);
  CHECK_THROWS_AS(route_shape({0, 0}, table), StructuralError);
  CHECK_THROWS_AS(route_shape({7}, table), StructuralError);

  CHECK(orient_route({0, 1}, table, E) == Route{1, 0});
  CHECK(orient_route({0, 1}, table, A) == Route{0, 1});
}

TEST_CASE("instance validation") {
  NetworkInstance inst = five_node_instance();
  CHECK_NOTHROW(inst.validate());
  CHECK(inst.incidence()[A] == std::vector<int>{AB, AC, AD});

  NetworkInstance bad = inst;
  bad.demands[0].volume = 101;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = inst;
  bad.links[2].b = bad.links[2].a;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
  bad = inst;
  bad.num_wavelengths = 0;
  CHECK_THROWS_AS(bad.validate(), StructuralError);
}
