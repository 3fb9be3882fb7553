#ifndef STG2_AGGREGATION_H
#define STG2_AGGREGATION_H

#include <cstdint>
#include <span>
#include <vector>

#include "stg2/core_model.h"
#include "stg2/solution.h"

namespace stg2 {

// Demands merged per unordered terminal pair. aggregates[i].id == i and
// aggregates[i].origins lists the original demand ids packed into it.
struct AggregationMap {
  std::vector<Demand> aggregates;
  std::vector<Demand> originals;
};

// First-fit-decreasing bin packing. Items are taken by volume non-increasing,
// ties by index ascending; returns the bin index of every item.
std::vector<int> first_fit_decreasing(std::span<const int64_t> volumes,
                                      int64_t capacity);

// Aggregates share both terminals of their members, with the orientation of
// the first member packed. Groups are ordered by (min terminal, max terminal).
AggregationMap aggregate_demands(std::span<const Demand> demands,
                                 int64_t capacity);

// Copies every aggregate plan to its members, reversing routes for members
// whose terminals are swapped relative to the aggregate. Throws
// std::invalid_argument when an aggregate has no plan.
Solution expand_solution(const Solution& aggregated, const AggregationMap& map);

}  // namespace stg2

#endif  // STG2_AGGREGATION_H
