#include "stg2/planner.h"

#include <algorithm>
#include <numeric>

namespace stg2 {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

NetworkInstance Aggregated(const NetworkInstance& original,
                           const AggregationMap& map) {
  NetworkInstance inst = original;
  inst.demands = map.aggregates;
  return inst;
}

bool Contains(const std::vector<int>& sorted, int value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

[[noreturn]] void Blocked(const PlanningState& state, int k,
                          const Scenario& scenario, SearchStatus status) {
  const char* why = status == SearchStatus::kPopLimit
                        ? "label limit reached"
                        : "no feasible path in the auxiliary graph";
  throw InfeasibleError(state.demand(k).origins.front(), scenario, why);
}

// Runs the labeling search, establishes new lightpaths and returns the route.
Route Search(PlanningState& state, int k, const Scenario& scenario,
             const CapacityCheck& check, std::span<const uint8_t> chi) {
  state.check_deadline();
  const Demand& d = state.demand(k);
  SearchContext ctx;
  ctx.demand = k;
  ctx.source = d.source;
  ctx.target = d.target;
  ctx.volume = d.volume;
  ctx.scenario = scenario;
  ctx.params = state.params.cost;
  ctx.chi = chi;
  ctx.capacity = &check;
  ctx.pop_limit = state.params.pop_limit;
  SearchResult result = find_route(state.lbag, state.hops, ctx);
  ++state.stats.labeling_calls;
  state.stats.label_pops += result.pops;
  state.stats.monotone_search &= result.monotone;
  if (result.status != SearchStatus::kFound) {
    Blocked(state, k, scenario, result.status);
  }
  return realize_route(state.lbag, result);
}

}  // namespace

InfeasibleError::InfeasibleError(int demand, const Scenario& scenario,
                                 const std::string& why)
    : std::runtime_error("demand " + std::to_string(demand) +
                         " blocked in scenario " + to_string(scenario) + ": " +
                         why),
      demand_(demand),
      scenario_(scenario) {}

uint64_t RoutePool::PairKey(int s, int t) {
  auto [lo, hi] = std::minmax(s, t);
  return (static_cast<uint64_t>(lo) << 32) | static_cast<uint32_t>(hi);
}

int RoutePool::add(const Route& route, int source, int target,
                   LightpathTable table) {
  Entry e;
  e.low = std::min(source, target);
  e.high = std::max(source, target);
  e.lightpaths = source == e.low ? route : Route(route.rbegin(), route.rend());
  uint64_t key = PairKey(source, target);
  auto [it, inserted] =
      index_.try_emplace({key, e.lightpaths}, static_cast<int>(entries_.size()));
  if (!inserted) return it->second;
  e.links = route_links(e.lightpaths, table);
  entries_.push_back(std::move(e));
  by_pair_[key].push_back(it->second);
  return it->second;
}

std::span<const int> RoutePool::routes_for(int s, int t) const {
  auto it = by_pair_.find(PairKey(s, t));
  if (it == by_pair_.end()) return {};
  return it->second;
}

Route RoutePool::oriented(int id, int source) const {
  const Entry& e = entries_[id];
  if (source == e.low) return e.lightpaths;
  return Route(e.lightpaths.rbegin(), e.lightpaths.rend());
}

int reuse_route(const RoutePool& pool, const Demand& demand,
                const Scenario& scenario, const CapacityCheck& check) {
  for (int id : pool.routes_for(demand.source, demand.target)) {
    const RoutePool::Entry& e = pool.get(id);
    if (!scenario.is_working()) {
      if (Contains(e.links, scenario.first)) continue;
      if (scenario.second != kNoLink && Contains(e.links, scenario.second)) {
        continue;
      }
    }
    bool fits = true;
    for (int l : e.lightpaths) {
      if (!check.admits(l)) {
        fits = false;
        break;
      }
    }
    if (fits) return id;
  }
  return -1;
}

int resolve_route(const RoutingTree& tree, const RoutePool& pool,
                  const Scenario& s, int num_links) {
  if (tree.working < 0) throw StructuralError("demand has no working route");
  if (s.is_working()) return tree.working;
  int current = tree.working;
  if (Contains(tree.working_links, s.first)) {
    auto it = tree.level1.find(s.first);
    if (it == tree.level1.end()) {
      throw StructuralError("missing level-1 route for " + to_string(s));
    }
    current = it->second;
  }
  if (s.level() == 1) return current;
  if (!Contains(pool.get(current).links, s.second)) return current;
  uint32_t idx = s.index(num_links);
  for (const auto& [scenario, id] : tree.level2) {
    if (scenario == idx) return id;
  }
  throw StructuralError("missing level-2 route for " + to_string(s));
}

PlanningState::PlanningState(const NetworkInstance& original,
                             const SolveParams& p)
    : params(p),
      aggregation(aggregate_demands(original.demands, original.capacity)),
      instance(Aggregated(original, aggregation)),
      hops(instance),
      lbag(instance),
      ledger(instance.num_links(), static_cast<int>(instance.demands.size()),
             instance.capacity),
      trees(instance.demands.size()),
      working_users(instance.links.size()),
      started(Clock::now()) {
  original.validate();
  ledger.set_observer(params.observer);
  if (params.time_limit_s > 0) {
    has_deadline = true;
    deadline = started + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(params.time_limit_s));
  }
  order.resize(instance.demands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return instance.demands[a].volume > instance.demands[b].volume;
  });
  rank.resize(order.size());
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
  stats.original_demands = static_cast<int>(original.demands.size());
  stats.aggregates = static_cast<int>(instance.demands.size());
  stats.aggregation_seconds = Seconds(started);
}

void PlanningState::check_deadline() const {
  if (has_deadline && Clock::now() > deadline) {
    throw TimeoutError("time limit of " + std::to_string(params.time_limit_s) +
                       " s exceeded");
  }
}

void plan_working(PlanningState& state) {
  auto t0 = Clock::now();
  for (int k : state.order) {
    const Demand& d = state.demand(k);
    WorkingCheck check(state.ledger, k, d.volume);
    Route route = Search(state, k, Scenario::Working(), check, {});
    int id = state.pool.add(route, d.source, d.target, state.lbag.lightpaths());
    const RoutePool::Entry& entry = state.pool.get(id);
    state.ledger.commit_working(k, d.volume, entry.lightpaths, entry.links);
    RoutingTree& tree = state.trees[k];
    tree.working = id;
    tree.working_links = entry.links;
    for (int e : entry.links) state.working_users[e].push_back(k);
  }
  state.stats.working_seconds = Seconds(t0);
}

void plan_level1(PlanningState& state) {
  auto t0 = Clock::now();
  state.ledger.advance(Phase::kLevel1);
  const int num_links = state.instance.num_links();
  std::vector<int> scenarios;
  for (int e = 0; e < num_links; ++e) {
    if (!state.working_users[e].empty()) scenarios.push_back(e);
  }
  std::stable_sort(scenarios.begin(), scenarios.end(), [&](int a, int b) {
    return state.working_users[a].size() > state.working_users[b].size();
  });
  std::vector<uint8_t> chi(num_links, 0);
  for (int e1 : scenarios) {
    ++state.stats.level1_scenarios;
    const Scenario scenario = Scenario::Level1(e1);
    for (int k : state.working_users[e1]) {
      const Demand& d = state.demand(k);
      RoutingTree& tree = state.trees[k];
      LevelOneCheck check(state.ledger, k, d.volume, e1);
      ++state.stats.reuse_attempts;
      int id = reuse_route(state.pool, d, scenario, check);
      if (id >= 0) {
        ++state.stats.reuse_hits;
      } else {
        for (int e : tree.working_links) chi[e] = !tree.level1.count(e);
        Route route = Search(state, k, scenario, check, chi);
        for (int e : tree.working_links) chi[e] = 0;
        id = state.pool.add(route, d.source, d.target, state.lbag.lightpaths());
      }
      const RoutePool::Entry& entry = state.pool.get(id);
      state.ledger.commit_level1(k, d.volume, e1, entry.lightpaths, entry.links);
      tree.level1[e1] = id;
    }
  }
  state.ledger.advance(Phase::kLevel2);
  state.stats.level1_seconds = Seconds(t0);
}

std::vector<uint32_t> sort_level2(const PlanningState& state) {
  const int n = state.instance.num_links();
  std::vector<uint32_t> count(static_cast<size_t>(n) * n, 0);
  for (const RoutingTree& tree : state.trees) {
    if (tree.working < 0) continue;
    for (int e2 : tree.working_links) {
      for (int e1 = 0; e1 < n; ++e1) {
        if (e1 == e2 || Contains(tree.working_links, e1)) continue;
        ++count[Scenario::Level2(e1, e2).index(n)];
      }
    }
    for (const auto& [e1, id] : tree.level1) {
      for (int e2 : state.pool.get(id).links) {
        ++count[Scenario::Level2(e1, e2).index(n)];
      }
    }
  }
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < count.size(); ++i) {
    if (count[i] > 0) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](uint32_t a, uint32_t b) {
    return count[a] > count[b];
  });
  return out;
}

std::vector<int> level2_demands(const PlanningState& state,
                                const Scenario& s) {
  std::vector<int> out;
  for (int k : state.working_users[s.second]) {
    if (!Contains(state.trees[k].working_links, s.first)) out.push_back(k);
  }
  size_t psi = out.size();
  for (int k : state.working_users[s.first]) {
    int r1 = state.trees[k].level1.at(s.first);
    if (Contains(state.pool.get(r1).links, s.second)) out.push_back(k);
  }
  std::inplace_merge(out.begin(), out.begin() + psi, out.end(),
                     [&](int a, int b) { return state.rank[a] < state.rank[b]; });
  return out;
}

void plan_level2_scenario(PlanningState& state, LevelTwoView& view,
                          std::span<const int> demands) {
  const Scenario& scenario = view.scenario();
  const uint32_t idx = scenario.index(state.instance.num_links());
  for (int k : demands) {
    const Demand& d = state.demand(k);
    LevelTwoCheck check(view, k, d.volume);
    ++state.stats.reuse_attempts;
    int id = reuse_route(state.pool, d, scenario, check);
    if (id >= 0) {
      ++state.stats.reuse_hits;
    } else {
      Route route = Search(state, k, scenario, check, {});
      id = state.pool.add(route, d.source, d.target, state.lbag.lightpaths());
    }
    const RoutePool::Entry& entry = state.pool.get(id);
    view.commit(k, d.volume, entry.lightpaths, entry.links);
    state.trees[k].level2.emplace_back(idx, id);
    ++state.stats.level2_routes;
  }
}

void plan_level2(PlanningState& state, std::span<const uint32_t> scenarios) {
  auto t0 = Clock::now();
  const int n = state.instance.num_links();
  for (uint32_t idx : scenarios) {
    Scenario s = Scenario::FromIndex(idx, n);
    std::vector<int> demands = level2_demands(state, s);
    LevelTwoView view(state.ledger, s);
    plan_level2_scenario(state, view, demands);
    ++state.stats.level2_scenarios;
  }
  state.stats.level2_seconds = Seconds(t0);
}

Solution build_aggregated_solution(const PlanningState& state) {
  Solution out;
  out.lightpaths = state.lbag.lightpaths();
  const int n = state.instance.num_links();
  for (size_t k = 0; k < state.trees.size(); ++k) {
    const RoutingTree& tree = state.trees[k];
    const int source = state.instance.demands[k].source;
    DemandPlan plan;
    plan.demand = static_cast<int>(k);
    if (tree.working >= 0) plan.working = state.pool.oriented(tree.working, source);
    for (const auto& [e1, id] : tree.level1) {
      plan.level1.emplace(e1, state.pool.oriented(id, source));
    }
    for (const auto& [idx, id] : tree.level2) {
      Scenario s = Scenario::FromIndex(idx, n);
      plan.level2.emplace(std::make_pair(s.first, s.second),
                          state.pool.oriented(id, source));
    }
    out.plans.push_back(std::move(plan));
  }
  return out;
}

Solution build_solution(const PlanningState& state) {
  return expand_solution(build_aggregated_solution(state), state.aggregation);
}

SolveResult solve(const NetworkInstance& instance, const SolveParams& params) {
  PlanningState state(instance, params);
  plan_working(state);
  plan_level1(state);
  std::vector<uint32_t> scenarios = sort_level2(state);
  plan_level2(state, scenarios);
  SolveResult result;
  result.solution = build_solution(state);
  state.stats.lightpaths = static_cast<int>(state.lbag.lightpaths().size());
  state.stats.pool_routes = static_cast<int64_t>(state.pool.size());
  state.stats.total_seconds = Seconds(state.started);
  result.stats = std::move(state.stats);
  return result;
}

}  // namespace stg2
