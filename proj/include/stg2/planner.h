#ifndef STG2_PLANNER_H
#define STG2_PLANNER_H

#include <chrono>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "stg2/aggregation.h"
#include "stg2/core_model.h"
#include "stg2/labeling.h"
#include "stg2/lbag.h"
#include "stg2/ledger.h"
#include "stg2/solution.h"

namespace stg2 {

struct SolveParams {
  CostParams cost;
  int64_t pop_limit = 5'000'000;
  double time_limit_s = 0;  // 0 disables the limit
  LedgerObserver* observer = nullptr;
};

// A live route search came back empty. `demand` is an original demand id
// (the first member of the blocked aggregate).
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(int demand, const Scenario& scenario, const std::string& why);
  int demand() const { return demand_; }
  const Scenario& scenario() const { return scenario_; }

 private:
  int demand_;
  Scenario scenario_;
};

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Routes generated so far, grouped by unordered terminal pair. Each entry is
// stored oriented from its smaller endpoint; identical routes are kept once.
class RoutePool {
 public:
  struct Entry {
    Route lightpaths;
    std::vector<int> links;  // sorted, unique
    int low = 0;             // min endpoint, start of `lightpaths`
    int high = 0;
  };

  // `route` runs from `source`. Returns the id of the stored entry.
  int add(const Route& route, int source, int target, LightpathTable table);
  const Entry& get(int id) const { return entries_[id]; }
  // Ids for {s, t} in insertion order.
  std::span<const int> routes_for(int s, int t) const;
  size_t size() const { return entries_.size(); }
  // `route` oriented to start at `source`.
  Route oriented(int id, int source) const;

 private:
  static uint64_t PairKey(int s, int t);
  std::vector<Entry> entries_;
  std::map<uint64_t, std::vector<int>> by_pair_;
  std::map<std::pair<uint64_t, Route>, int> index_;
};

struct RoutingTree {
  int working = -1;                             // pool id
  std::vector<int> working_links;               // sorted E(r00)
  std::map<int, int> level1;                    // e1 -> pool id
  std::vector<std::pair<uint32_t, int>> level2;  // scenario index -> pool id
};

struct IterationStats {
  int pooled = 0;
  int planned = 0;  // completed by slaves
  int blocked = 0;
  int master_new_lightpaths = 0;
  int new_routes = 0;
  double slave_seconds = 0;
  double master_seconds = 0;
  bool frozen_ok = true;
};

struct SolveStats {
  int original_demands = 0;
  int aggregates = 0;
  int lightpaths = 0;
  double aggregation_seconds = 0;
  double working_seconds = 0;
  double level1_seconds = 0;
  double level2_seconds = 0;
  double total_seconds = 0;
  int64_t labeling_calls = 0;
  int64_t reuse_attempts = 0;
  int64_t reuse_hits = 0;
  int64_t label_pops = 0;
  int64_t level1_scenarios = 0;
  int64_t level2_scenarios = 0;
  int64_t level2_routes = 0;
  int64_t pool_routes = 0;
  bool monotone_search = true;
  bool frozen_invariant = true;
  std::vector<IterationStats> iterations;
};

struct SolveResult {
  Solution solution;
  SolveStats stats;
};

// Everything the heuristic mutates. Non-movable: the LBAG refers to
// `instance`.
struct PlanningState {
  PlanningState(const NetworkInstance& original, const SolveParams& params);
  PlanningState(const PlanningState&) = delete;
  PlanningState& operator=(const PlanningState&) = delete;

  const Demand& demand(int k) const { return instance.demands[k]; }
  void check_deadline() const;

  SolveParams params;
  AggregationMap aggregation;
  NetworkInstance instance;  // demands are the aggregates
  MinHopTable hops;
  Lbag lbag;
  Ledger ledger;
  RoutePool pool;
  std::vector<RoutingTree> trees;
  std::vector<int> order;  // aggregates by volume non-increasing, id ascending
  std::vector<int> rank;   // rank[k] = position of k in `order`
  std::vector<std::vector<int>> working_users;  // per link, aggregates by rank
  SolveStats stats;
  std::chrono::steady_clock::time_point started;
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
};

class WorkingCheck : public CapacityCheck {
 public:
  WorkingCheck(const Ledger& ledger, int demand, int64_t volume)
      : ledger_(ledger), demand_(demand), volume_(volume) {}
  bool admits(int l) const override {
    return ledger_.check_working(demand_, volume_, l);
  }

 private:
  const Ledger& ledger_;
  int demand_;
  int64_t volume_;
};

class LevelOneCheck : public CapacityCheck {
 public:
  LevelOneCheck(const Ledger& ledger, int demand, int64_t volume, int e1)
      : ledger_(ledger), demand_(demand), volume_(volume), e1_(e1) {}
  bool admits(int l) const override {
    return ledger_.check_level1(demand_, volume_, l, e1_);
  }

 private:
  const Ledger& ledger_;
  int demand_;
  int64_t volume_;
  int e1_;
};

class LevelTwoCheck : public CapacityCheck {
 public:
  LevelTwoCheck(const LevelTwoView& view, int demand, int64_t volume)
      : view_(view), demand_(demand), volume_(volume) {}
  bool admits(int l) const override {
    return view_.check(demand_, volume_, l);
  }

 private:
  const LevelTwoView& view_;
  int demand_;
  int64_t volume_;
};

// First pooled route for {s_k, t_k} that avoids the failed links and passes
// `check` on every lightpath, or -1. Does not commit.
int reuse_route(const RoutePool& pool, const Demand& demand,
                const Scenario& scenario, const CapacityCheck& check);

// Pool id of the route demand k uses in `scenario` by consistent routing.
// Throws StructuralError when the tree has no route for it.
int resolve_route(const RoutingTree& tree, const RoutePool& pool,
                  const Scenario& scenario, int num_links);

void plan_working(PlanningState& state);
void plan_level1(PlanningState& state);
// Level-2 scenarios with at least one demand to plan, by number of such
// demands non-increasing, ties by scenario index.
std::vector<uint32_t> sort_level2(const PlanningState& state);
// Aggregates k with the scenario in Psi_k or Theta_k(e1), in planning order.
std::vector<int> level2_demands(const PlanningState& state,
                                const Scenario& scenario);
// Plans `demands` in `view`'s scenario with reuse-then-search in live mode.
void plan_level2_scenario(PlanningState& state, LevelTwoView& view,
                          std::span<const int> demands);
void plan_level2(PlanningState& state, std::span<const uint32_t> scenarios);

// Solution over the original demands.
Solution build_solution(const PlanningState& state);
// Solution over the aggregates (plans keyed by aggregate id).
Solution build_aggregated_solution(const PlanningState& state);

// Sequential hierarchical heuristic. Throws InfeasibleError or TimeoutError.
SolveResult solve(const NetworkInstance& instance, const SolveParams& params = {});

}  // namespace stg2

#endif  // STG2_PLANNER_H
