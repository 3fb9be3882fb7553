#ifndef STG2_CORE_MODEL_H
#define STG2_CORE_MODEL_H

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stg2 {

// Raised when an object violates its structural invariants (disconnected
// lightpath, dangling id, ...).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kNoLink = -1;

struct Link {
  int id = 0;
  int a = 0;
  int b = 0;
  int64_t length_km = 0;

  int other(int node) const { return node == a ? b : a; }
  bool touches(int node) const { return node == a || node == b; }
};

struct Demand {
  int id = 0;
  int source = 0;
  int target = 0;
  int64_t volume = 0;
  // Ids of the original demands merged into this one. Equal to {id} for
  // demands read from an instance file.
  std::vector<int> origins;
};

// Undirected optical network with demands. Node ids are 0..num_nodes-1 and
// link ids 0..links.size()-1.
struct NetworkInstance {
  int num_nodes = 0;
  std::vector<Link> links;
  int num_wavelengths = 1;
  int64_t capacity = 100;  // B, Gbps per wavelength
  int64_t reach_km = 0;    // optical reach
  std::vector<Demand> demands;

  int num_links() const { return static_cast<int>(links.size()); }

  // Link ids incident to each node, in ascending id order.
  std::vector<std::vector<int>> incidence() const;

  // Throws StructuralError describing the first broken invariant.
  void validate() const;
};

// (e1, e2) failure state. (kNoLink, kNoLink) is the working scenario.
struct Scenario {
  int first = kNoLink;
  int second = kNoLink;

  static Scenario Working() { return {}; }
  static Scenario Level1(int e1) { return {e1, kNoLink}; }
  static Scenario Level2(int e1, int e2) { return {e1, e2}; }

  int level() const {
    return first == kNoLink ? 0 : (second == kNoLink ? 1 : 2);
  }
  bool is_working() const { return first == kNoLink; }
  bool fails(int link) const {
    return link != kNoLink && (link == first || link == second);
  }
  bool valid() const {
    if (first == kNoLink) return second == kNoLink;
    return second != first;
  }

  // Dense key for level-2 scenarios: e1 * |E| + e2.
  uint32_t index(int num_links) const {
    return static_cast<uint32_t>(first) * static_cast<uint32_t>(num_links) +
           static_cast<uint32_t>(second);
  }
  static Scenario FromIndex(uint32_t index, int num_links) {
    return {static_cast<int>(index / num_links),
            static_cast<int>(index % num_links)};
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::string to_string(const Scenario& s);

struct ScenarioCounts {
  int64_t working = 1;
  int64_t level1 = 0;
  int64_t level2 = 0;

  int64_t total() const { return working + level1 + level2; }
  friend bool operator==(const ScenarioCounts&, const ScenarioCounts&) =
      default;
};

// Sizes of the working, single-failure and ordered double-failure scenario
// sets for a network with `link_count` links.
ScenarioCounts scenario_universe(int64_t link_count);

// A wavelength plus a node-simple sequence of links. `nodes` has
// links.size() + 1 entries; nodes.front() and nodes.back() are the endpoints.
struct Lightpath {
  int id = 0;
  int wavelength = 0;
  std::vector<int> links;
  std::vector<int> nodes;
  int64_t length_km = 0;

  int a() const { return nodes.front(); }
  int b() const { return nodes.back(); }
  int other_end(int node) const { return node == a() ? b() : a(); }
  bool has_endpoint(int node) const { return node == a() || node == b(); }
  bool traverses(int link) const;
};

// Builds a lightpath and derives its node sequence. Throws StructuralError if
// the links are not a connected, node-simple path, exceed the reach or the
// wavelength is out of range.
Lightpath make_lightpath(const NetworkInstance& instance, int id,
                         int wavelength, std::vector<int> links);

// A route is a sequence of lightpath ids. The lightpath table is indexed by
// those ids.
using Route = std::vector<int>;
using LightpathTable = std::span<const Lightpath>;

struct RouteShape {
  int source = 0;
  int target = 0;
  std::vector<int> nodes;  // physical node sequence
  std::vector<int> links;  // E(r) in traversal order, may repeat
};

// Walks the route. If `start` is negative the start node is inferred from the
// first two lightpaths. Throws StructuralError for unconnected lightpaths or
// repeated lightpath ids.
RouteShape route_shape(const Route& route, LightpathTable lightpaths,
                       int start = -1);

// Sorted, de-duplicated E(r).
std::vector<int> route_links(const Route& route, LightpathTable lightpaths);

bool route_is_elementary(const Route& route, LightpathTable lightpaths,
                         int start = -1);

bool route_avoids(const Route& route, LightpathTable lightpaths,
                  const Scenario& scenario);

// Reorders the route so that it starts at `source`. Throws StructuralError
// if neither end of the route is `source`.
Route orient_route(const Route& route, LightpathTable lightpaths, int source);

}  // namespace stg2

#endif  // STG2_CORE_MODEL_H
