#include "stg2/verifier.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace stg2 {

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kStructure: return "structure";
    case ViolationKind::kWavelengthAssignment: return "wavelength-assignment";
    case ViolationKind::kReach: return "reach";
    case ViolationKind::kElementarity: return "elementarity";
    case ViolationKind::kCoverage: return "coverage";
    case ViolationKind::kFailedLink: return "failed-link";
    case ViolationKind::kConsistency: return "consistency";
    case ViolationKind::kCapacity: return "capacity";
  }
  return "unknown";
}

bool VerifyReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

namespace {

struct CheckedLightpath {
  bool valid = false;
  int a = -1;
  int b = -1;
  std::vector<int> nodes;
};

struct CheckedRoute {
  bool valid = false;
  std::vector<int> lightpaths;  // indices into the solution table, distinct
  std::vector<int> links;       // sorted, unique
};

bool Has(const std::vector<int>& sorted, int v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

class Verifier {
 public:
  Verifier(const NetworkInstance& inst, const Solution& sol,
           const VerifyOptions& opt)
      : inst_(inst), sol_(sol), opt_(opt) {}

  VerifyReport Run() {
    report_.objective = sol_.objective();
    CheckLightpaths();
    CheckWavelengths();
    CheckPlans();
    CheckScenarios();
    report_.feasible = report_.violation_count == 0;
    return std::move(report_);
  }

 private:
  struct DemandState {
    bool planned = false;
    CheckedRoute working;
    std::map<int, CheckedRoute> level1;
    std::map<std::pair<int, int>, CheckedRoute> level2;
  };

  void Add(Violation v) {
    ++report_.violation_count;
    if (report_.violations.size() < opt_.max_reported) {
      report_.violations.push_back(std::move(v));
    }
  }
  void Add(ViolationKind kind, int demand, const Scenario* s, int lp, int link,
           std::string detail) {
    Violation v;
    v.kind = kind;
    v.demand = demand;
    if (s) {
      v.has_scenario = true;
      v.scenario = *s;
    }
    v.lightpath = lp;
    v.link = link;
    v.detail = std::move(detail);
    Add(std::move(v));
  }

  void CheckLightpaths() {
    lps_.resize(sol_.lightpaths.size());
    for (size_t i = 0; i < sol_.lightpaths.size(); ++i) {
      const Lightpath& lp = sol_.lightpaths[i];
      CheckedLightpath& c = lps_[i];
      if (!index_.emplace(lp.id, static_cast<int>(i)).second) {
        Add(ViolationKind::kStructure, -1, nullptr, lp.id, -1,
            "duplicate lightpath id");
        continue;
      }
      if (lp.links.empty()) {
        Add(ViolationKind::kStructure, -1, nullptr, lp.id, -1,
            "lightpath without links");
        continue;
      }
      bool ok = true;
      for (int e : lp.links) {
        if (e < 0 || e >= inst_.num_links()) ok = false;
      }
      if (!ok) {
        Add(ViolationKind::kStructure, -1, nullptr, lp.id, -1,
            "lightpath references an unknown link");
        continue;
      }
      if (lp.wavelength < 0 || lp.wavelength >= inst_.num_wavelengths) {
        Add(ViolationKind::kStructure, -1, nullptr, lp.id, -1,
            "wavelength outside the wavelength set");
        ok = false;
      }
      // Node sequence from the links alone.
      const Link& first = inst_.links[lp.links.front()];
      int start = first.a;
      if (lp.links.size() > 1 && !inst_.links[lp.links[1]].touches(first.b)) {
        start = first.b;
      }
      std::vector<int> nodes{start};
      int64_t length = 0;
      int cur = start;
      for (int e : lp.links) {
        const Link& l = inst_.links[e];
        if (!l.touches(cur)) {
          ok = false;
          Add(ViolationKind::kStructure, -1, nullptr, lp.id, e,
              "wavelength continuity broken: links are not connected");
          break;
        }
        cur = l.other(cur);
        nodes.push_back(cur);
        length += l.length_km;
      }
      if (!ok) continue;
      std::unordered_set<int> seen(nodes.begin(), nodes.end());
      if (seen.size() != nodes.size()) {
        Add(ViolationKind::kStructure, -1, nullptr, lp.id, -1,
            "lightpath revisits a node");
        continue;
      }
      if (length > inst_.reach_km) {
        Add(ViolationKind::kReach, -1, nullptr, lp.id, -1,
            "length " + std::to_string(length) + " km exceeds reach " +
                std::to_string(inst_.reach_km) + " km");
      }
      c.valid = true;
      c.a = nodes.front();
      c.b = nodes.back();
      c.nodes = std::move(nodes);
    }
  }

  void CheckWavelengths() {
    std::unordered_map<uint64_t, int> owner;
    for (const Lightpath& lp : sol_.lightpaths) {
      if (lp.wavelength < 0 || lp.wavelength >= inst_.num_wavelengths) continue;
      for (int e : lp.links) {
        if (e < 0 || e >= inst_.num_links()) continue;
        uint64_t key = (static_cast<uint64_t>(lp.wavelength) << 32) |
                       static_cast<uint32_t>(e);
        auto [it, fresh] = owner.emplace(key, lp.id);
        if (!fresh && it->second != lp.id) {
          Add(ViolationKind::kWavelengthAssignment, -1, nullptr, lp.id, e,
              "wavelength " + std::to_string(lp.wavelength) +
                  " also used by lightpath " + std::to_string(it->second));
        }
      }
    }
  }

  CheckedRoute Walk(const Route& route, int demand, const Scenario* s) {
    const Demand& d = inst_.demands[demand];
    CheckedRoute out;
    if (route.empty()) {
      Add(ViolationKind::kStructure, demand, s, -1, -1, "empty route");
      return out;
    }
    int cur = d.source;
    std::unordered_set<int> used;
    std::vector<int> nodes{cur};
    for (int id : route) {
      auto it = index_.find(id);
      if (it == index_.end() || !lps_[it->second].valid) {
        Add(ViolationKind::kStructure, demand, s, id, -1,
            "route uses an unknown or malformed lightpath");
        return out;
      }
      if (!used.insert(id).second) {
        Add(ViolationKind::kStructure, demand, s, id, -1,
            "route repeats a lightpath");
        return out;
      }
      const CheckedLightpath& c = lps_[it->second];
      if (c.a == cur) {
        nodes.insert(nodes.end(), c.nodes.begin() + 1, c.nodes.end());
        cur = c.b;
      } else if (c.b == cur) {
        nodes.insert(nodes.end(), c.nodes.rbegin() + 1, c.nodes.rend());
        cur = c.a;
      } else {
        Add(ViolationKind::kStructure, demand, s, id, -1,
            "route lightpaths are not end-to-end connected");
        return out;
      }
      out.lightpaths.push_back(it->second);
      const Lightpath& lp = sol_.lightpaths[it->second];
      out.links.insert(out.links.end(), lp.links.begin(), lp.links.end());
    }
    if (cur != d.target) {
      Add(ViolationKind::kStructure, demand, s, -1, -1,
          "route does not end at the demand target");
      out.lightpaths.clear();
      return out;
    }
    std::sort(out.links.begin(), out.links.end());
    out.links.erase(std::unique(out.links.begin(), out.links.end()),
                    out.links.end());
    if (s == nullptr) {
      std::unordered_set<int> seen(nodes.begin(), nodes.end());
      if (seen.size() != nodes.size()) {
        Add(ViolationKind::kElementarity, demand, nullptr, -1, -1,
            "working route revisits a node");
      }
    }
    out.valid = true;
    return out;
  }

  void CheckAvoids(const CheckedRoute& r, int demand, const Scenario& s) {
    if (!r.valid) return;
    for (int e : {s.first, s.second}) {
      if (e != kNoLink && Has(r.links, e)) {
        Add(ViolationKind::kFailedLink, demand, &s, -1, e,
            "route traverses a failed link");
      }
    }
  }

  void CheckPlans() {
    const int n = inst_.num_links();
    demands_.resize(inst_.demands.size());
    for (const DemandPlan& plan : sol_.plans) {
      if (plan.demand < 0 ||
          plan.demand >= static_cast<int>(inst_.demands.size())) {
        Add(ViolationKind::kStructure, plan.demand, nullptr, -1, -1,
            "plan for an unknown demand");
        continue;
      }
      DemandState& st = demands_[plan.demand];
      if (st.planned) {
        Add(ViolationKind::kStructure, plan.demand, nullptr, -1, -1,
            "demand planned twice");
        continue;
      }
      st.planned = true;
      st.working = Walk(plan.working, plan.demand, nullptr);
      for (const auto& [e1, route] : plan.level1) {
        Scenario s = Scenario::Level1(e1);
        if (e1 < 0 || e1 >= n) {
          Add(ViolationKind::kStructure, plan.demand, &s, -1, e1,
              "level-1 record for an unknown link");
          continue;
        }
        if (st.working.valid && !Has(st.working.links, e1)) {
          Add(ViolationKind::kConsistency, plan.demand, &s, -1, e1,
              "explicit level-1 route although the working route survives");
        }
        CheckedRoute r = Walk(route, plan.demand, &s);
        CheckAvoids(r, plan.demand, s);
        st.level1.emplace(e1, std::move(r));
      }
      for (const auto& [key, route] : plan.level2) {
        Scenario s = Scenario::Level2(key.first, key.second);
        if (key.first < 0 || key.first >= n || key.second < 0 ||
            key.second >= n || key.first == key.second) {
          Add(ViolationKind::kStructure, plan.demand, &s, -1, -1,
              "level-2 record for an invalid scenario");
          continue;
        }
        if (st.working.valid) {
          const CheckedRoute* prior = &st.working;
          if (Has(st.working.links, key.first)) {
            auto it = st.level1.find(key.first);
            prior = it == st.level1.end() ? nullptr : &it->second;
          }
          if (prior && prior->valid && !Has(prior->links, key.second)) {
            Add(ViolationKind::kConsistency, plan.demand, &s, -1, -1,
                "explicit level-2 route although the previous route "
                "survives");
          }
        }
        CheckedRoute r = Walk(route, plan.demand, &s);
        CheckAvoids(r, plan.demand, s);
        st.level2.emplace(key, std::move(r));
      }
    }
  }

  // Route of demand k in s by consistent routing, or nullptr.
  const CheckedRoute* Resolve(int k, const Scenario& s) const {
    const DemandState& st = demands_[k];
    if (!st.planned || !st.working.valid) return nullptr;
    const CheckedRoute* cur = &st.working;
    if (s.is_working()) return cur;
    if (Has(cur->links, s.first)) {
      auto it = st.level1.find(s.first);
      if (it == st.level1.end()) return nullptr;
      cur = &it->second;
    }
    if (s.level() == 1) return cur->valid ? cur : nullptr;
    if (!cur->valid) return nullptr;
    if (!Has(cur->links, s.second)) return cur;
    auto it = st.level2.find({s.first, s.second});
    if (it == st.level2.end()) return nullptr;
    return &it->second;
  }

  bool Usable(const CheckedRoute* r, const Scenario& s) const {
    if (r == nullptr || !r->valid) return false;
    return !(s.first != kNoLink && Has(r->links, s.first)) &&
           !(s.second != kNoLink && Has(r->links, s.second));
  }

  void CheckScenarios() {
    const int n = inst_.num_links();
    const size_t K = inst_.demands.size();
    const int64_t B = inst_.capacity;
    const size_t L = sol_.lightpaths.size();
    ScenarioCounts counts = n > 0 ? scenario_universe(n) : ScenarioCounts{};
    report_.total_scenarios = counts.total();

    std::vector<std::vector<int>> users(n);
    std::vector<int64_t> base(L, 0);
    bool all_working = true;
    for (size_t k = 0; k < K; ++k) {
      const DemandState& st = demands_[k];
      if (!st.planned) {
        Add(ViolationKind::kCoverage, static_cast<int>(k), nullptr, -1, -1,
            "demand has no plan");
        all_working = false;
        continue;
      }
      if (!st.working.valid) {
        all_working = false;
        continue;
      }
      for (int l : st.working.lightpaths) base[l] += inst_.demands[k].volume;
      for (int e : st.working.links) users[e].push_back(static_cast<int>(k));
    }
    // Working overloads persist in every scenario the lightpath is not
    // touched in.
    std::vector<size_t> base_over;
    for (size_t l = 0; l < L; ++l) {
      Usage(l, base[l], B, Scenario::Working());
      if (base[l] > B) base_over.push_back(l);
    }
    if (all_working) ++report_.covered_scenarios;

    std::vector<int64_t> extra(L, 0);
    std::vector<int> touched;
    std::vector<uint32_t> mark(K, 0);
    uint32_t epoch = 0;
    std::vector<uint8_t> in_working(L, 0);

    auto run = [&](const Scenario& s) {
      ++epoch;
      bool covered = all_working;
      auto visit = [&](int k) {
        if (mark[k] == epoch) return;
        mark[k] = epoch;
        const CheckedRoute* r = Resolve(k, s);
        if (!Usable(r, s)) {
          covered = false;
          if (r == nullptr) {
            Add(ViolationKind::kCoverage, k, &s, -1, -1,
                "no route for the scenario");
          }
          return;
        }
        const CheckedRoute& w = demands_[k].working;
        for (int l : w.lightpaths) in_working[l] = 1;
        for (int l : r->lightpaths) {
          if (in_working[l]) continue;
          if (extra[l] == 0) touched.push_back(l);
          extra[l] += inst_.demands[k].volume;
        }
        for (int l : w.lightpaths) in_working[l] = 0;
      };
      if (s.first != kNoLink) {
        for (int k : users[s.first]) visit(k);
      }
      if (s.second != kNoLink) {
        for (int k : users[s.second]) visit(k);
      }
      for (size_t l : base_over) {
        if (extra[l] == 0) Usage(l, base[l], B, s);
      }
      for (int l : touched) {
        Usage(l, base[l] + extra[l], B, s);
        extra[l] = 0;
      }
      touched.clear();
      if (covered) ++report_.covered_scenarios;
    };

    for (int e1 = 0; e1 < n; ++e1) run(Scenario::Level1(e1));
    for (int e1 = 0; e1 < n; ++e1) {
      for (int e2 = 0; e2 < n; ++e2) {
        if (e1 != e2) run(Scenario::Level2(e1, e2));
      }
    }
  }

  void Usage(size_t l, int64_t load, int64_t B, const Scenario& s) {
    report_.max_utilization =
        std::max(report_.max_utilization, static_cast<double>(load) / B);
    if (load > B) {
      Add(ViolationKind::kCapacity, -1, &s, sol_.lightpaths[l].id, -1,
          "load " + std::to_string(load) + " exceeds capacity " +
              std::to_string(B));
    }
  }

  const NetworkInstance& inst_;
  const Solution& sol_;
  const VerifyOptions& opt_;
  VerifyReport report_;
  std::vector<CheckedLightpath> lps_;
  std::unordered_map<int, int> index_;
  std::vector<DemandState> demands_;
};

}  // namespace

VerifyReport verify(const NetworkInstance& instance, const Solution& solution,
                    const VerifyOptions& options) {
  return Verifier(instance, solution, options).Run();
}

VerifyReport verify_aggregated(const NetworkInstance& instance,
                               const Solution& aggregated,
                               const AggregationMap& map,
                               const VerifyOptions& options) {
  NetworkInstance agg = instance;
  agg.demands = map.aggregates;
  return verify(agg, aggregated, options);
}

std::string report_text(const VerifyReport& r) {
  std::ostringstream os;
  os << (r.feasible ? "FEASIBLE" : "INFEASIBLE") << ": " << r.objective
     << " lightpaths, " << r.violation_count << " violations, "
     << r.covered_scenarios << "/" << r.total_scenarios
     << " scenarios covered\n";
  for (const Violation& v : r.violations) {
    os << "  [" << to_string(v.kind) << "]";
    if (v.demand >= 0) os << " demand " << v.demand;
    if (v.has_scenario) os << " scenario " << to_string(v.scenario);
    if (v.lightpath >= 0) os << " lightpath " << v.lightpath;
    if (v.link >= 0) os << " link " << v.link;
    os << ": " << v.detail << '\n';
  }
  if (r.violation_count > static_cast<int64_t>(r.violations.size())) {
    os << "  ... " << r.violation_count - r.violations.size() << " more\n";
  }
  return os.str();
}

std::string report_key_values(const VerifyReport& r) {
  char util[32];
  std::snprintf(util, sizeof util, "%.4f", r.max_utilization);
  std::ostringstream os;
  os << "feasible=" << (r.feasible ? 1 : 0) << '\n'
     << "objective=" << r.objective << '\n'
     << "violations=" << r.violation_count << '\n'
     << "max_utilization=" << util << '\n'
     << "covered_scenarios=" << r.covered_scenarios << '\n'
     << "total_scenarios=" << r.total_scenarios << '\n';
  return os.str();
}

}  // namespace stg2
