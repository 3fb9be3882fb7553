#include "stg2/parallel.h"

#include <algorithm>
#include <exception>
#include <map>
#include <thread>

namespace stg2 {

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool Contains(const std::vector<int>& sorted, int value) {
  return std::binary_search(sorted.begin(), sorted.end(), value);
}

// Routes found by one slave during its phase.
class LocalPool {
 public:
  explicit LocalPool(SlaveResult& out) : out_(out) {}

  int add(const Route& route, int source, int target, LightpathTable table) {
    auto [lo, hi] = std::minmax(source, target);
    Route canonical = source == lo ? route : Route(route.rbegin(), route.rend());
    auto key = std::make_pair(std::make_pair(lo, hi), canonical);
    auto [it, inserted] =
        index_.try_emplace(key, static_cast<int>(out_.local_routes.size()));
    if (!inserted) return it->second;
    out_.local_routes.push_back(route);
    out_.local_terminals.emplace_back(source, target);
    links_.push_back(route_links(route, table));
    by_pair_[{lo, hi}].push_back(it->second);
    return it->second;
  }

  int reuse(const Demand& d, const Scenario& s, const CapacityCheck& check) const {
    auto it = by_pair_.find(std::minmax(d.source, d.target));
    if (it == by_pair_.end()) return -1;
    for (int id : it->second) {
      const std::vector<int>& links = links_[id];
      if (Contains(links, s.first) || Contains(links, s.second)) continue;
      bool fits = true;
      for (int l : out_.local_routes[id]) {
        if (!check.admits(l)) {
          fits = false;
          break;
        }
      }
      if (fits) return id;
    }
    return -1;
  }

  const std::vector<int>& links(int id) const { return links_[id]; }

 private:
  SlaveResult& out_;
  std::vector<std::vector<int>> links_;
  std::map<std::pair<int, int>, std::vector<int>> by_pair_;
  std::map<std::pair<std::pair<int, int>, Route>, int> index_;
};

}  // namespace

std::vector<std::vector<size_t>> assign_pools(size_t count, int threads,
                                              int64_t pool_size) {
  std::vector<std::vector<size_t>> pools(std::max(threads, 0));
  for (int t = 0; t < threads; ++t) {
    for (int64_t i = 0; i < pool_size; ++i) {
      size_t pos = static_cast<size_t>(t) + static_cast<size_t>(i) * threads;
      if (pos >= count) break;
      pools[t].push_back(pos);
    }
  }
  return pools;
}

SlaveResult slave_plan(const PlanningState& state,
                       std::span<const uint32_t> pool, SharedFlags& flags,
                       const ParallelParams& params) {
  SlaveResult out;
  LocalPool local(out);
  const int n = state.instance.num_links();
  const size_t lightpaths = state.lbag.lightpaths().size();
  size_t flushed = 0;
  int64_t processed = 0;
  bool stop = false;

  for (uint32_t idx : pool) {
    if (stop) break;
    if (state.has_deadline && Clock::now() > state.deadline) break;
    const Scenario s = Scenario::FromIndex(idx, n);
    std::vector<int> demands = level2_demands(state, s);
    LevelTwoView view(state.ledger, s);
    std::vector<int> unplanned;
    std::vector<SlaveAssignment> assigned;
    for (int k : demands) {
      const Demand& d = state.demand(k);
      LevelTwoCheck check(view, k, d.volume);
      ++out.reuse_attempts;
      const Route* route = nullptr;
      const std::vector<int>* links = nullptr;
      SlaveAssignment a{k, idx, -1, false};
      if (int id = reuse_route(state.pool, d, s, check); id >= 0) {
        ++out.reuse_hits;
        a.route = id;
        route = &state.pool.get(id).lightpaths;
        links = &state.pool.get(id).links;
      } else if (int lid = local.reuse(d, s, check); lid >= 0) {
        ++out.reuse_hits;
        a.route = lid;
        a.local = true;
      } else {
        SearchContext ctx;
        ctx.demand = k;
        ctx.source = d.source;
        ctx.target = d.target;
        ctx.volume = d.volume;
        ctx.scenario = s;
        ctx.params = state.params.cost;
        ctx.capacity = &check;
        ctx.frozen = true;
        ctx.pop_limit = state.params.pop_limit;
        SearchResult found = find_route(state.lbag, state.hops, ctx);
        ++out.labeling_calls;
        out.label_pops += found.pops;
        if (found.status != SearchStatus::kFound) {
          unplanned.push_back(k);
          continue;
        }
        Route r;
        for (const RoutePiece& piece : found.pieces) r.push_back(piece.lightpath);
        a.route = local.add(r, d.source, d.target, state.lbag.lightpaths());
        a.local = true;
      }
      if (a.local) {
        route = &out.local_routes[a.route];
        links = &local.links(a.route);
      }
      view.commit(k, d.volume, *route, *links);
      assigned.push_back(a);
    }
    ++processed;
    out.assignments.insert(out.assignments.end(), assigned.begin(),
                           assigned.end());
    if (unplanned.empty()) {
      out.planned.push_back(idx);
      if (out.local_routes.size() - flushed >=
          static_cast<size_t>(params.check_routes)) {
        flags.routes.fetch_add(
            static_cast<int64_t>(out.local_routes.size() - flushed),
            std::memory_order_relaxed);
        flushed = out.local_routes.size();
        stop = flags.should_stop(params);
      } else if (processed % params.check_scenarios == 0) {
        stop = flags.should_stop(params);
      }
    } else {
      out.blocked.push_back(
          {idx, view.snapshot(static_cast<int>(lightpaths)), std::move(unplanned)});
      flags.failed.fetch_add(1, std::memory_order_relaxed);
      stop = flags.should_stop(params);
    }
  }
  flags.idle.store(true, std::memory_order_relaxed);
  out.frozen_ok = state.lbag.lightpaths().size() == lightpaths;
  return out;
}

int master_plan(PlanningState& state, std::vector<SlaveResult>& results) {
  const size_t before = state.lbag.lightpaths().size();
  const int n = state.instance.num_links();
  for (SlaveResult& r : results) {
    std::vector<int> merged(r.local_routes.size());
    for (size_t i = 0; i < r.local_routes.size(); ++i) {
      merged[i] = state.pool.add(r.local_routes[i], r.local_terminals[i].first,
                                 r.local_terminals[i].second,
                                 state.lbag.lightpaths());
    }
    for (const SlaveAssignment& a : r.assignments) {
      int id = a.local ? merged[a.route] : a.route;
      state.trees[a.demand].level2.emplace_back(a.scenario, id);
      ++state.stats.level2_routes;
    }
    state.stats.labeling_calls += r.labeling_calls;
    state.stats.reuse_attempts += r.reuse_attempts;
    state.stats.reuse_hits += r.reuse_hits;
    state.stats.label_pops += r.label_pops;
  }
  // Blocked scenarios in the order of sort_level2.
  std::vector<std::pair<size_t, BlockedRecord*>> blocked;
  for (SlaveResult& r : results) {
    for (BlockedRecord& rec : r.blocked) {
      Scenario s = Scenario::FromIndex(rec.scenario, n);
      blocked.emplace_back(level2_demands(state, s).size(), &rec);
    }
  }
  std::sort(blocked.begin(), blocked.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second->scenario < y.second->scenario;
  });
  for (auto& [count, rec] : blocked) {
    Scenario s = Scenario::FromIndex(rec->scenario, n);
    LevelTwoView view(state.ledger, s, std::move(rec->loads));
    plan_level2_scenario(state, view, rec->unplanned);
  }
  return static_cast<int>(state.lbag.lightpaths().size() - before);
}

SolveResult solve_parallel(const NetworkInstance& instance,
                           const SolveParams& params,
                           const ParallelParams& parallel) {
  if (parallel.threads < 1 || parallel.pool_size < 1 ||
      parallel.max_failed < 1 || parallel.max_routes < 1 ||
      parallel.check_scenarios < 1 || parallel.check_routes < 1) {
    throw std::invalid_argument("parallel parameters must be positive");
  }
  if (params.observer != nullptr) {
    throw std::invalid_argument("ledger observers need a sequential solve");
  }
  PlanningState state(instance, params);
  plan_working(state);
  plan_level1(state);
  std::vector<uint32_t> remaining = sort_level2(state);

  auto t0 = Clock::now();
  const int n = state.instance.num_links();
  std::vector<uint8_t> done(static_cast<size_t>(n) * n, 0);
  SharedFlags flags;
  while (!remaining.empty()) {
    state.check_deadline();
    flags.reset();
    IterationStats it;
    std::vector<std::vector<uint32_t>> pools;
    for (const std::vector<size_t>& positions :
         assign_pools(remaining.size(), parallel.threads, parallel.pool_size)) {
      std::vector<uint32_t> p;
      for (size_t pos : positions) p.push_back(remaining[pos]);
      it.pooled += static_cast<int>(p.size());
      pools.push_back(std::move(p));
    }

    const size_t lightpaths_before = state.lbag.lightpaths().size();
    const size_t entries_before = state.ledger.sparse_entries();
    std::vector<SlaveResult> results(parallel.threads);
    std::vector<std::exception_ptr> errors(parallel.threads);
    auto ts = Clock::now();
    {
      std::vector<std::thread> workers;
      const PlanningState& frozen = state;
      for (int t = 0; t < parallel.threads; ++t) {
        workers.emplace_back([&, t] {
          try {
            results[t] = slave_plan(frozen, pools[t], flags, parallel);
          } catch (...) {
            errors[t] = std::current_exception();
            flags.idle.store(true);
          }
        });
      }
      for (std::thread& w : workers) w.join();
    }
    it.slave_seconds = Seconds(ts);
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    it.frozen_ok = state.lbag.lightpaths().size() == lightpaths_before &&
                   state.ledger.sparse_entries() == entries_before;
    for (const SlaveResult& r : results) {
      it.frozen_ok &= r.frozen_ok;
      it.planned += static_cast<int>(r.planned.size());
      it.blocked += static_cast<int>(r.blocked.size());
      it.new_routes += static_cast<int>(r.local_routes.size());
      for (uint32_t idx : r.planned) done[idx] = 1;
      for (const BlockedRecord& b : r.blocked) done[b.scenario] = 1;
    }
    state.check_deadline();
    auto tm = Clock::now();
    it.master_new_lightpaths = master_plan(state, results);
    it.master_seconds = Seconds(tm);
    state.stats.frozen_invariant &= it.frozen_ok;
    state.stats.level2_scenarios += it.planned + it.blocked;
    state.stats.iterations.push_back(it);

    std::vector<uint32_t> next;
    for (uint32_t idx : remaining) {
      if (!done[idx]) next.push_back(idx);
    }
    remaining.swap(next);
  }
  state.stats.level2_seconds = Seconds(t0);

  SolveResult result;
  result.solution = build_solution(state);
  state.stats.lightpaths = static_cast<int>(state.lbag.lightpaths().size());
  state.stats.pool_routes = static_cast<int64_t>(state.pool.size());
  state.stats.total_seconds = Seconds(state.started);
  result.stats = std::move(state.stats);
  return result;
}

}  // namespace stg2
