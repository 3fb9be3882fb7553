#ifndef STG2_TESTS_FIXTURES_H
#define STG2_TESTS_FIXTURES_H

#include <string>

#include "stg2/instance_io.h"
#include "stg2/solution.h"

namespace stg2::testing {

// Five nodes A..E (0..4), eight links, two wavelengths, B = 100, reach 500.
inline constexpr const char* kFiveNodeText =
    "# A=0 B=1 C=2 D=3 E=4\n"
    "NETWORK 5 8 2 2 100 500\n"
    "LINK 0 0 1 400\n"  // AB
    "LINK 1 1 2 400\n"  // BC
    "LINK 2 0 2 200\n"  // AC
    "LINK 3 0 3 300\n"  // AD
    "LINK 4 2 3 100\n"  // CD
    "LINK 5 2 4 200\n"  // CE
    "LINK 6 3 4 300\n"  // DE
    "LINK 7 1 4 400\n"  // BE
    "DEMAND 0 0 4 50\n"
    "DEMAND 1 0 2 50\n";

enum FiveNodeLink { AB = 0, BC, AC, AD, CD, CE, DE, BE };
enum FiveNodeName { A = 0, B, C, D, E };

inline NetworkInstance five_node_instance() { return parse_instance(kFiveNodeText); }

// l1 = (λ1, AC), l2 = (λ1, CE), l3 = (λ1, AD CD), l4 = (λ2, CD DE) with the
// routes for the working scenario, (AC, 0) and (AC, CE) only.
inline Solution sample_solution(const NetworkInstance& inst) {
  Solution s;
  s.lightpaths.push_back(make_lightpath(inst, 0, 0, {AC}));
  s.lightpaths.push_back(make_lightpath(inst, 1, 0, {CE}));
  s.lightpaths.push_back(make_lightpath(inst, 2, 0, {AD, CD}));
  s.lightpaths.push_back(make_lightpath(inst, 3, 1, {CD, DE}));
  DemandPlan ae;
  ae.demand = 0;
  ae.working = {0, 1};
  ae.level1[AC] = {2, 1};
  ae.level2[{AC, CE}] = {2, 3};
  DemandPlan ac;
  ac.demand = 1;
  ac.working = {0};
  ac.level1[AC] = {2};
  s.plans = {ae, ac};
  return s;
}

inline NetworkInstance small_instance(uint64_t seed, int nodes = 10,
                                      int links = 18, int demands = 24) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.nodes = nodes;
  cfg.links = links;
  cfg.demands = demands;
  cfg.wavelengths = 16;
  cfg.volumes = {1, 2, 10};
  return generate_instance(cfg).instance;
}

}  // namespace stg2::testing

#endif  // STG2_TESTS_FIXTURES_H
