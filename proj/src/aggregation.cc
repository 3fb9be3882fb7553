#include "stg2/aggregation.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace stg2 {

std::vector<int> first_fit_decreasing(std::span<const int64_t> volumes,
                                      int64_t capacity) {
  std::vector<int> order(volumes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return volumes[a] > volumes[b];
  });
  std::vector<int> bin_of(volumes.size(), -1);
  std::vector<int64_t> residual;
  for (int item : order) {
    if (volumes[item] > capacity) {
      throw std::invalid_argument("item larger than bin capacity");
    }
    size_t b = 0;
    while (b < residual.size() && residual[b] < volumes[item]) ++b;
    if (b == residual.size()) residual.push_back(capacity);
    residual[b] -= volumes[item];
    bin_of[item] = static_cast<int>(b);
  }
  return bin_of;
}

AggregationMap aggregate_demands(std::span<const Demand> demands,
                                 int64_t capacity) {
  std::map<std::pair<int, int>, std::vector<int>> groups;
  for (size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];
    groups[std::minmax(d.source, d.target)].push_back(static_cast<int>(i));
  }

  AggregationMap out;
  out.originals.assign(demands.begin(), demands.end());
  for (const auto& [key, members] : groups) {
    // Members are in input order; FFD breaks volume ties by position, which
    // is ascending original id for instance-ordered input.
    std::vector<int> sorted = members;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      return demands[a].id < demands[b].id;
    });
    std::vector<int64_t> volumes;
    for (int m : sorted) volumes.push_back(demands[m].volume);
    std::vector<int> bin_of = first_fit_decreasing(volumes, capacity);
    int bins = *std::max_element(bin_of.begin(), bin_of.end()) + 1;

    std::vector<std::vector<int>> packed(bins);
    std::vector<int> order(sorted.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return volumes[a] > volumes[b]; });
    for (int i : order) packed[bin_of[i]].push_back(sorted[i]);

    for (const std::vector<int>& bin : packed) {
      Demand agg;
      agg.id = static_cast<int>(out.aggregates.size());
      agg.source = demands[bin.front()].source;
      agg.target = demands[bin.front()].target;
      for (int m : bin) {
        agg.volume += demands[m].volume;
        agg.origins.push_back(demands[m].id);
      }
      out.aggregates.push_back(std::move(agg));
    }
  }
  return out;
}

namespace {

Route Reversed(const Route& r) { return Route(r.rbegin(), r.rend()); }

}  // namespace

Solution expand_solution(const Solution& aggregated, const AggregationMap& map) {
  std::vector<const DemandPlan*> by_aggregate(map.aggregates.size(), nullptr);
  for (const DemandPlan& plan : aggregated.plans) {
    if (plan.demand < 0 ||
        plan.demand >= static_cast<int>(map.aggregates.size())) {
      throw std::invalid_argument("plan for unknown aggregate " +
                                  std::to_string(plan.demand));
    }
    by_aggregate[plan.demand] = &plan;
  }
  std::map<int, const Demand*> original_by_id;
  for (const Demand& d : map.originals) original_by_id[d.id] = &d;

  Solution out;
  out.lightpaths = aggregated.lightpaths;
  for (const Demand& agg : map.aggregates) {
    const DemandPlan* plan = by_aggregate[agg.id];
    if (plan == nullptr) {
      throw std::invalid_argument("aggregate " + std::to_string(agg.id) +
                                  " has no route");
    }
    for (int origin : agg.origins) {
      auto it = original_by_id.find(origin);
      if (it == original_by_id.end()) {
        throw std::invalid_argument("aggregate member " +
                                    std::to_string(origin) + " is unknown");
      }
      bool flip = it->second->source != agg.source;
      DemandPlan copy;
      copy.demand = origin;
      copy.working = flip ? Reversed(plan->working) : plan->working;
      for (const auto& [e1, r] : plan->level1) {
        copy.level1.emplace(e1, flip ? Reversed(r) : r);
      }
      for (const auto& [key, r] : plan->level2) {
        copy.level2.emplace(key, flip ? Reversed(r) : r);
      }
      out.plans.push_back(std::move(copy));
    }
  }
  std::sort(out.plans.begin(), out.plans.end(),
            [](const DemandPlan& a, const DemandPlan& b) {
              return a.demand < b.demand;
            });
  return out;
}

}  // namespace stg2
