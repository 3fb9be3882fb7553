#ifndef STG2_PARALLEL_H
#define STG2_PARALLEL_H

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "stg2/planner.h"

namespace stg2 {

struct ParallelParams {
  int threads = 1;          // M
  int64_t pool_size = 10000;  // NS
  int64_t max_failed = 64;    // NF
  int64_t max_routes = 1024;  // NR
  int64_t check_scenarios = 16;  // CS
  int64_t check_routes = 64;     // CR
};

// State shared by the slave threads of one iteration.
struct SharedFlags {
  std::atomic<bool> idle{false};
  std::atomic<int64_t> failed{0};
  std::atomic<int64_t> routes{0};

  void reset() {
    idle.store(false);
    failed.store(0);
    routes.store(0);
  }
  bool should_stop(const ParallelParams& p) const {
    return idle.load(std::memory_order_relaxed) ||
           failed.load(std::memory_order_relaxed) >= p.max_failed ||
           routes.load(std::memory_order_relaxed) >= p.max_routes;
  }
};

// Splits positions of `count` sorted scenarios over `threads` pools: pool t
// (0-based) gets positions t + i * threads for i < pool_size.
std::vector<std::vector<size_t>> assign_pools(size_t count, int threads,
                                              int64_t pool_size);

// A scenario a slave could not finish without new lightpaths.
struct BlockedRecord {
  uint32_t scenario = 0;
  std::vector<int64_t> loads;  // C(l) for every lightpath at blocking time
  std::vector<int> unplanned;  // aggregates still without a route
};

// A route a slave reached. `local` routes index the slave's own route list.
struct SlaveAssignment {
  int demand = 0;
  uint32_t scenario = 0;
  int route = 0;
  bool local = false;
};

struct SlaveResult {
  std::vector<uint32_t> planned;  // fully planned scenarios
  std::vector<BlockedRecord> blocked;
  std::vector<SlaveAssignment> assignments;
  std::vector<Route> local_routes;  // oriented source -> target
  std::vector<std::pair<int, int>> local_terminals;
  int64_t labeling_calls = 0;
  int64_t reuse_attempts = 0;
  int64_t reuse_hits = 0;
  int64_t label_pops = 0;
  bool frozen_ok = true;
};

// Plans the scenarios of one pool without establishing lightpaths. Reads the
// planning state only.
SlaveResult slave_plan(const PlanningState& state,
                       std::span<const uint32_t> pool, SharedFlags& flags,
                       const ParallelParams& params);

// Merges slave routes into the shared pool and records slave assignments,
// then plans every blocked scenario from its recorded loads in live mode, in
// the order of sort_level2.
// Returns the number of lightpaths established.
int master_plan(PlanningState& state, std::vector<SlaveResult>& results);

// Working and level-1 phases as in `solve`, then master-slave iterations
// over the level-2 scenarios.
SolveResult solve_parallel(const NetworkInstance& instance,
                           const SolveParams& params,
                           const ParallelParams& parallel);

}  // namespace stg2

#endif  // STG2_PARALLEL_H
