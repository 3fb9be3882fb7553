#ifndef STG2_VERIFIER_H
#define STG2_VERIFIER_H

#include <cstdint>
#include <string>
#include <vector>

#include "stg2/aggregation.h"
#include "stg2/core_model.h"
#include "stg2/solution.h"

namespace stg2 {

enum class ViolationKind {
  kStructure,             // malformed lightpath, route or plan
  kWavelengthAssignment,  // two lightpaths share (wavelength, link)
  kReach,                 // lightpath longer than the optical reach
  kElementarity,          // working route revisits a node
  kCoverage,              // no route for a demand in a scenario
  kFailedLink,            // route traverses a failed link
  kConsistency,           // explicit route where consistent routing forbids one
  kCapacity,              // lightpath load above B in a scenario
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kStructure;
  int demand = -1;
  bool has_scenario = false;
  Scenario scenario;
  int lightpath = -1;
  int link = -1;
  std::string detail;
};

struct VerifyReport {
  bool feasible = true;
  int objective = 0;
  std::vector<Violation> violations;  // first `max_reported` only
  int64_t violation_count = 0;
  double max_utilization = 0;
  int64_t covered_scenarios = 0;  // scenarios in which every demand is routed
  int64_t total_scenarios = 0;

  bool has(ViolationKind kind) const;
};

struct VerifyOptions {
  size_t max_reported = 1000;
};

// Checks every constraint over every scenario, using only the instance and
// the solution. Problems are reported as violations, never thrown.
VerifyReport verify(const NetworkInstance& instance, const Solution& solution,
                    const VerifyOptions& options = {});

// Same checks over aggregated demands: plans are keyed by aggregate id.
VerifyReport verify_aggregated(const NetworkInstance& instance,
                               const Solution& aggregated,
                               const AggregationMap& map,
                               const VerifyOptions& options = {});

std::string report_text(const VerifyReport& report);
std::string report_key_values(const VerifyReport& report);

}  // namespace stg2

#endif  // STG2_VERIFIER_H
