#include "stg2/core_model.h"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "stg2/wavelength_set.h"

namespace stg2 {

namespace {

[[noreturn]] void Fail(const std::string& what) { throw StructuralError(what); }

}  // namespace

std::vector<std::vector<int>> NetworkInstance::incidence() const {
  std::vector<std::vector<int>> out(num_nodes);
  for (const Link& link : links) {
    out[link.a].push_back(link.id);
    out[link.b].push_back(link.id);
  }
  return out;
}

void NetworkInstance::validate() const {
  if (num_nodes < 1) Fail("instance needs at least one node");
  if (num_wavelengths < 1 || num_wavelengths > kMaxWavelengths) {
    Fail("wavelength count must be in [1, " + std::to_string(kMaxWavelengths) +
         "]");
  }
  if (capacity <= 0) Fail("capacity must be positive");
  if (reach_km <= 0) Fail("optical reach must be positive");
  for (size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    if (l.id != static_cast<int>(i)) Fail("link ids must be dense");
    if (l.a < 0 || l.a >= num_nodes || l.b < 0 || l.b >= num_nodes) {
      Fail("link " + std::to_string(l.id) + " has an unknown endpoint");
    }
    if (l.a == l.b) Fail("link " + std::to_string(l.id) + " is a self-loop");
    if (l.length_km <= 0) {
      Fail("link " + std::to_string(l.id) + " has non-positive length");
    }
  }
  for (size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];
    if (d.id != static_cast<int>(i)) Fail("demand ids must be dense");
    if (d.source < 0 || d.source >= num_nodes || d.target < 0 ||
        d.target >= num_nodes) {
      Fail("demand " + std::to_string(d.id) + " has an unknown terminal");
    }
    if (d.source == d.target) {
      Fail("demand " + std::to_string(d.id) + " has equal terminals");
    }
    if (d.volume <= 0 || d.volume > capacity) {
      Fail("demand " + std::to_string(d.id) + " volume outside (0, B]");
    }
  }
}

std::string to_string(const Scenario& s) {
  std::ostringstream os;
  os << '(' << s.first << ',' << s.second << ')';
  return os.str();
}

ScenarioCounts scenario_universe(int64_t link_count) {
  if (link_count < 1) throw std::invalid_argument("link count must be >= 1");
  return {1, link_count, link_count * link_count - link_count};
}

bool Lightpath::traverses(int link) const {
  return std::find(links.begin(), links.end(), link) != links.end();
}

Lightpath make_lightpath(const NetworkInstance& instance, int id,
                         int wavelength, std::vector<int> links) {
  if (links.empty()) Fail("lightpath " + std::to_string(id) + " has no links");
  if (wavelength < 0 || wavelength >= instance.num_wavelengths) {
    Fail("lightpath " + std::to_string(id) + " uses unknown wavelength " +
         std::to_string(wavelength));
  }
  for (int e : links) {
    if (e < 0 || e >= instance.num_links()) {
      Fail("lightpath " + std::to_string(id) + " references unknown link " +
           std::to_string(e));
    }
  }
  Lightpath lp;
  lp.id = id;
  lp.wavelength = wavelength;

  const Link& first = instance.links[links.front()];
  int start = first.a;
  if (links.size() > 1) {
    const Link& second = instance.links[links[1]];
    start = second.touches(first.b) ? first.a : first.b;
    if (!second.touches(first.other(start))) {
      Fail("lightpath " + std::to_string(id) + " links are not connected");
    }
  }
  lp.nodes.push_back(start);
  int cur = start;
  for (int e : links) {
    const Link& link = instance.links[e];
    if (!link.touches(cur)) {
      Fail("lightpath " + std::to_string(id) + " links are not connected");
    }
    cur = link.other(cur);
    lp.nodes.push_back(cur);
    lp.length_km += link.length_km;
  }
  std::unordered_set<int> seen(lp.nodes.begin(), lp.nodes.end());
  if (seen.size() != lp.nodes.size()) {
    Fail("lightpath " + std::to_string(id) + " revisits a node");
  }
  if (lp.length_km > instance.reach_km) {
    Fail("lightpath " + std::to_string(id) + " exceeds the optical reach");
  }
  lp.links = std::move(links);
  return lp;
}

RouteShape route_shape(const Route& route, LightpathTable lightpaths,
                       int start) {
  if (route.empty()) Fail("empty route");
  auto lookup = [&](int id) -> const Lightpath& {
    if (id < 0 || static_cast<size_t>(id) >= lightpaths.size()) {
      Fail("route references unknown lightpath " + std::to_string(id));
    }
    return lightpaths[id];
  };
  std::unordered_set<int> distinct(route.begin(), route.end());
  if (distinct.size() != route.size()) Fail("route repeats a lightpath");

  const Lightpath& head = lookup(route.front());
  if (start < 0) {
    start = head.a();
    if (route.size() > 1) {
      const Lightpath& next = lookup(route[1]);
      // Prefer the endpoint that is not the junction with the next lightpath.
      if (next.has_endpoint(head.a()) && !next.has_endpoint(head.b())) {
        start = head.b();
      }
    }
  }
  RouteShape shape;
  shape.source = start;
  int cur = start;
  shape.nodes.push_back(cur);
  for (int id : route) {
    const Lightpath& lp = lookup(id);
    if (!lp.has_endpoint(cur)) Fail("route lightpaths are not connected");
    if (lp.a() == cur) {
      shape.nodes.insert(shape.nodes.end(), lp.nodes.begin() + 1,
                         lp.nodes.end());
      shape.links.insert(shape.links.end(), lp.links.begin(), lp.links.end());
    } else {
      shape.nodes.insert(shape.nodes.end(), lp.nodes.rbegin() + 1,
                         lp.nodes.rend());
      shape.links.insert(shape.links.end(), lp.links.rbegin(),
                         lp.links.rend());
    }
    cur = lp.other_end(cur);
  }
  shape.target = cur;
  return shape;
}

std::vector<int> route_links(const Route& route, LightpathTable lightpaths) {
  std::vector<int> out;
  for (int id : route) {
    const Lightpath& lp = lightpaths[id];
    out.insert(out.end(), lp.links.begin(), lp.links.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool route_is_elementary(const Route& route, LightpathTable lightpaths,
                         int start) {
  RouteShape shape = route_shape(route, lightpaths, start);
  std::unordered_set<int> seen(shape.nodes.begin(), shape.nodes.end());
  return seen.size() == shape.nodes.size();
}

bool route_avoids(const Route& route, LightpathTable lightpaths,
                  const Scenario& scenario) {
  if (scenario.is_working()) return true;
  for (int id : route) {
    for (int e : lightpaths[id].links) {
      if (scenario.fails(e)) return false;
    }
  }
  return true;
}

Route orient_route(const Route& route, LightpathTable lightpaths, int source) {
  RouteShape shape = route_shape(route, lightpaths);
  if (shape.source == source) return route;
  if (shape.target == source) return Route(route.rbegin(), route.rend());
  // Ambiguous start (first two lightpaths share both endpoints).
  shape = route_shape(route, lightpaths, source);
  return route;
}

}  // namespace stg2
