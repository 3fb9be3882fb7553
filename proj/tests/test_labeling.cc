#include <random>
#include <set>

#include "doctest.h"
#include "stg2/labeling.h"
#include "support/fixtures.h"

using namespace stg2;
using namespace stg2::testing;

namespace {

Label make_label(int node, double cost, int64_t seg, WavelengthSet free) {
  Label l;
  l.node = node;
  l.cost = cost;
  l.seg_length = seg;
  l.free = free;
  return l;
}

WavelengthSet of(std::initializer_list<int> ws) {
  WavelengthSet s;
  for (int w : ws) s.insert(w);
  return s;
}

}  // namespace

TEST_CASE("rule 1 removes the costlier label at a logical node") {
  Label l1 = make_label(7, 3, 0, {});
  Label l2 = make_label(7, 4, 0, {});
  CHECK(dominate(l1, l2, true, false) == Dominance::kRemove);
  Label l3 = make_label(7, 2, 0, {});
  CHECK(dominate(l1, l3, true, false) == Dominance::kNone);
  Label other = make_label(8, 9, 0, {});
  CHECK(dominate(l1, other, true, false) == Dominance::kNone);
}

TEST_CASE("rule 2 strips shared wavelengths at a physical node") {
  Label l1 = make_label(2, 3, 100, of({0, 1}));
  Label l2 = make_label(2, 5, 200, of({1, 2}));
  CHECK(dominate(l1, l2, false, false) == Dominance::kShrink);
  CHECK(l2.free == of({2}));
  Label l3 = make_label(2, 5, 200, of({0}));
  CHECK(dominate(l1, l3, false, false) == Dominance::kRemove);
  Label longer = make_label(2, 5, 50, of({0}));
  CHECK(dominate(l1, longer, false, false) == Dominance::kNone);
  CHECK(longer.free == of({0}));
}

TEST_CASE("rule 3 removes outright when a common wavelength exists") {
  Label l1 = make_label(2, 3, 100, of({0}));
  Label l2 = make_label(2, 5, 200, of({1, 2}));
  CHECK(dominate(l1, l2, false, true) == Dominance::kRemove);
  Label l3 = make_label(2, 5, 50, of({1}));
  CHECK(dominate(l1, l3, false, true) == Dominance::kNone);
}

TEST_CASE("double failure on the fixture reuses l3 and adds a lightpath over "
          "CD and DE") {
  NetworkInstance inst = five_node_instance();
  Lbag g(inst);
  g.add_lightpath(0, {AC});
  g.add_lightpath(0, {CE});
  g.add_lightpath(0, {AD, CD});
  MinHopTable h(inst);
  SearchContext ctx;
  ctx.source = A;
  ctx.target = E;
  ctx.volume = 50;
  ctx.scenario = Scenario::Level2(AC, CE);
  SearchResult r = find_route(g, h, ctx);
  REQUIRE(r.status == SearchStatus::kFound);
  REQUIRE(r.pieces.size() == 2);
  CHECK(r.pieces[0].lightpath == 2);
  CHECK(r.pieces[1].lightpath == -1);
  CHECK(r.pieces[1].links == std::vector<int>{CD, DE});
  CHECK(choose_wavelength(g, r.pieces[1].links) == 1);
  std::vector<int> created;
  Route route = realize_route(g, r, &created);
  CHECK(route == Route{2, 3});
  CHECK(created == std::vector<int>{3});
  CHECK(g.lightpaths()[3].wavelength == 1);
}

TEST_CASE("wavelength choice takes the smallest common free index") {
  NetworkInstance inst = five_node_instance();
  Lbag g(inst);
  g.add_lightpath(0, {AD, CD});
  std::vector<int> seg{CD, DE};
  CHECK(choose_wavelength(g, seg) == 1);
  g.add_lightpath(1, {CD});
  CHECK(choose_wavelength(g, seg) == -1);
}

TEST_CASE("lightpaths over failed links cannot be extended") {
  NetworkInstance inst = five_node_instance();
  Lbag g(inst);
  g.add_lightpath(0, {AC});
  MinHopTable h(inst);
  SearchContext ctx;
  ctx.source = A;
  ctx.target = C;
  ctx.scenario = Scenario::Level2(AC, CE);
  LabelSearch s(g, h, ctx);
  int root = s.seed();
  Arc over_ac{ArcKind::kLogical, g.logical(A), g.logical(C), 0};
  CHECK_FALSE(s.extend(root, over_ac).has_value());
  ctx.scenario = Scenario::Working();
  LabelSearch w(g, h, ctx);
  CHECK(w.extend(w.seed(), over_ac).has_value());
}

TEST_CASE("receiver arcs need a physical segment") {
  NetworkInstance inst = five_node_instance();
  Lbag g(inst);
  MinHopTable h(inst);
  SearchContext ctx;
  ctx.source = A;
  ctx.target = C;
  LabelSearch s(g, h, ctx);
  int root = s.seed();
  auto tx = s.extend(root, {ArcKind::kTransmitter, g.logical(A), A, -1});
  REQUIRE(tx);
  CHECK_FALSE(s.extend(*tx, {ArcKind::kReceiver, A, g.logical(A), -1}));
  auto ab = s.extend(*tx, {ArcKind::kPhysical, A, B, AB});
  REQUIRE(ab);
  CHECK(s.label(*ab).seg_length == 400);
  // AB + BC exceeds the 500 km reach.
  CHECK_FALSE(s.extend(*ab, {ArcKind::kPhysical, B, C, BC}));
  CHECK(s.extend(*ab, {ArcKind::kReceiver, B, g.logical(B), -1}));
}

TEST_CASE("frozen searches never establish lightpaths") {
  NetworkInstance inst = five_node_instance();
  Lbag g(inst);
  MinHopTable h(inst);
  SearchContext ctx;
  ctx.source = A;
  ctx.target = E;
  ctx.frozen = true;
  CHECK(find_route(g, h, ctx).status == SearchStatus::kFrozenExhausted);
  g.add_lightpath(0, {AC});
  g.add_lightpath(0, {CE});
  SearchResult r = find_route(g, h, ctx);
  REQUIRE(r.status == SearchStatus::kFound);
  for (const RoutePiece& p : r.pieces) CHECK(p.lightpath >= 0);
  ctx.target = A;
  CHECK_THROWS_AS(find_route(g, h, ctx), StructuralError);
}

TEST_CASE("found routes satisfy the route constraints") {
  std::mt19937_64 rng(8);
  int found = 0;
  for (int trial = 0; trial < 120; ++trial) {
    NetworkInstance inst = small_instance(1 + trial % 5, 10, 16, 4);
    Lbag g(inst);
    MinHopTable h(inst);
    const int n = inst.num_links();
    for (int step = 0; step < 6; ++step) {
      SearchContext ctx;
      ctx.source = static_cast<int>(rng() % inst.num_nodes);
      ctx.target = (ctx.source + 1 + static_cast<int>(rng() % (inst.num_nodes - 1))) %
                   inst.num_nodes;
      int level = static_cast<int>(rng() % 3);
      int e1 = static_cast<int>(rng() % n);
      int e2 = (e1 + 1 + static_cast<int>(rng() % (n - 1))) % n;
      ctx.scenario = level == 0   ? Scenario::Working()
                     : level == 1 ? Scenario::Level1(e1)
                                  : Scenario::Level2(e1, e2);
      SearchResult r = find_route(g, h, ctx);
      CHECK(r.monotone);
      if (r.status != SearchStatus::kFound) continue;
      ++found;
      for (const RoutePiece& p : r.pieces) {
        if (p.lightpath >= 0) continue;
        int64_t len = 0;
        for (int e : p.links) len += inst.links[e].length_km;
        CHECK(len <= inst.reach_km);
        CHECK(choose_wavelength(g, p.links) >= 0);
      }
      Route route = realize_route(g, r);
      LightpathTable table(g.lightpaths());
      RouteShape shape = route_shape(route, table, ctx.source);
      CHECK(shape.target == ctx.target);
      CHECK(route_avoids(route, table, ctx.scenario));
      if (ctx.scenario.is_working()) {
        CHECK(route_is_elementary(route, table, ctx.source));
      }
      std::set<int> distinct(route.begin(), route.end());
      CHECK(distinct.size() == route.size());
    }
  }
  CHECK(found > 300);
}
