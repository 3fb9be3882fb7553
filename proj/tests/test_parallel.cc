#include <algorithm>
#include <set>

#include "doctest.h"
#include "stg2/instance_io.h"
#include "stg2/parallel.h"
#include "stg2/verifier.h"
#include "support/fixtures.h"
#include "support/oracles.h"

using namespace stg2;
using namespace stg2::testing;

TEST_CASE("scenario pools interleave sorted positions") {
  auto pools = assign_pools(10, 3, 100);
  REQUIRE(pools.size() == 3);
  CHECK(pools[0] == std::vector<size_t>{0, 3, 6, 9});
  CHECK(pools[1] == std::vector<size_t>{1, 4, 7});
  CHECK(pools[2] == std::vector<size_t>{2, 5, 8});
  auto capped = assign_pools(10, 2, 2);
  CHECK(capped[0] == std::vector<size_t>{0, 2});
  CHECK(capped[1] == std::vector<size_t>{1, 3});
  CHECK(assign_pools(0, 4, 10)[3].empty());
}

TEST_CASE("stop flags") {
  ParallelParams p;
  p.max_failed = 2;
  p.max_routes = 5;
  SharedFlags f;
  CHECK_FALSE(f.should_stop(p));
  f.failed = 2;
  CHECK(f.should_stop(p));
  f.reset();
  f.routes = 5;
  CHECK(f.should_stop(p));
  f.reset();
  f.idle = true;
  CHECK(f.should_stop(p));
}

TEST_CASE("slaves plan without establishing lightpaths") {
  NetworkInstance inst = small_instance(3);
  SolveParams params;
  PlanningState state(inst, params);
  plan_working(state);
  plan_level1(state);
  std::vector<uint32_t> scenarios = sort_level2(state);
  const size_t lps = state.lbag.lightpaths().size();
  SharedFlags flags;
  ParallelParams pp;
  pp.max_failed = 1 << 20;
  pp.max_routes = 1 << 20;
  SlaveResult r = slave_plan(state, scenarios, flags, pp);
  CHECK(flags.idle.load());
  CHECK(r.frozen_ok);
  CHECK(state.lbag.lightpaths().size() == lps);
  CHECK(r.planned.size() + r.blocked.size() == scenarios.size());
  std::set<uint32_t> blocked;
  for (const BlockedRecord& b : r.blocked) {
    CHECK_FALSE(b.unplanned.empty());
    CHECK(b.loads.size() == lps);
    blocked.insert(b.scenario);
  }
  // Every demand of a fully planned scenario got a route.
  size_t expected = 0;
  for (uint32_t idx : r.planned) {
    expected += level2_demands(state, Scenario::FromIndex(idx, inst.num_links()))
                    .size();
  }
  size_t planned_assignments = 0;
  for (const SlaveAssignment& a : r.assignments) {
    if (!blocked.count(a.scenario)) ++planned_assignments;
  }
  CHECK(planned_assignments == expected);

  std::vector<SlaveResult> results{r};
  master_plan(state, results);
  CHECK(verify(inst, build_solution(state)).feasible);
}

TEST_CASE("parallel solves are verifier-clean and close to sequential") {
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    NetworkInstance inst = small_instance(seed, 12, 20, 40);
    SolveResult seq = solve(inst);
    for (int m : {2, 4}) {
      ParallelParams pp;
      pp.threads = m;
      pp.check_scenarios = 4;
      pp.check_routes = 8;
      pp.max_failed = 4;
      pp.max_routes = 64;
      SolveResult par = solve_parallel(inst, {}, pp);
      VerifyReport rep = verify(inst, par.solution);
      CHECK(rep.feasible);
      CHECK(par.stats.frozen_invariant);
      CHECK_FALSE(par.stats.iterations.empty());
      for (const IterationStats& it : par.stats.iterations) {
        CHECK(it.frozen_ok);
        CHECK(it.planned + it.blocked <= it.pooled);
      }
      CHECK(par.stats.lightpaths == par.solution.objective());
      CHECK(par.solution.objective() <= seq.solution.objective() * 1.25 + 2);
    }
  }
}

TEST_CASE("one thread matches the sequential plan") {
  NetworkInstance inst = small_instance(4);
  ParallelParams pp;
  pp.threads = 1;
  pp.max_failed = 1 << 20;
  pp.max_routes = 1 << 20;
  SolveResult par = solve_parallel(inst, {}, pp);
  CHECK(verify(inst, par.solution).feasible);
  CHECK(par.stats.iterations.size() >= 1);
}

TEST_CASE("invalid parallel configurations are rejected") {
  NetworkInstance inst = five_node_instance();
  ParallelParams pp;
  pp.threads = 0;
  CHECK_THROWS_AS(solve_parallel(inst, {}, pp), std::invalid_argument);
  pp.threads = 2;
  pp.check_routes = 0;
  CHECK_THROWS_AS(solve_parallel(inst, {}, pp), std::invalid_argument);
  pp.check_routes = 1;
  DirectLedger oracle(inst.num_links(), 2);
  SolveParams sp;
  sp.observer = &oracle;
  CHECK_THROWS_AS(solve_parallel(inst, sp, pp), std::invalid_argument);
}
