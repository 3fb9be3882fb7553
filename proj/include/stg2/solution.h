#ifndef STG2_SOLUTION_H
#define STG2_SOLUTION_H

#include <map>
#include <utility>
#include <vector>

#include "stg2/core_model.h"

namespace stg2 {

// Routing tree of one demand. Only explicit routes are stored; every other
// scenario is resolved by consistent routing.
struct DemandPlan {
  int demand = 0;
  Route working;
  std::map<int, Route> level1;                  // e1 -> route
  std::map<std::pair<int, int>, Route> level2;  // (e1, e2) -> route

  friend bool operator==(const DemandPlan&, const DemandPlan&) = default;
};

struct Solution {
  std::vector<Lightpath> lightpaths;
  std::vector<DemandPlan> plans;  // ascending demand id

  int objective() const { return static_cast<int>(lightpaths.size()); }
};

// Number of established lightpaths.
inline int objective(const Solution& solution) {
  return solution.objective();
}

inline bool operator==(const Lightpath& x, const Lightpath& y) {
  return x.id == y.id && x.wavelength == y.wavelength && x.links == y.links;
}

inline bool operator==(const Solution& x, const Solution& y) {
  return x.lightpaths == y.lightpaths && x.plans == y.plans;
}

}  // namespace stg2

#endif  // STG2_SOLUTION_H
