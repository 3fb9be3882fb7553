#include "stg2/instance_io.h"
#include "stg2/wavelength_set.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_set>

namespace stg2 {

ParseError::ParseError(int line, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason),
      line_(line) {}

namespace {

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

std::vector<Line> Tokenize(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    Line parsed{number, {}};
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) parsed.tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (!parsed.tokens.empty()) out.push_back(std::move(parsed));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

int64_t ToInt(const Line& line, size_t index, const char* what) {
  if (index >= line.tokens.size()) {
    throw ParseError(line.number, std::string("missing ") + what);
  }
  std::string_view tok = line.tokens[index];
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line.number, std::string("bad integer for ") + what +
                                      ": '" + std::string(tok) + "'");
  }
  return value;
}

void ExpectArity(const Line& line, size_t n) {
  if (line.tokens.size() != n) {
    throw ParseError(line.number, "expected " + std::to_string(n) +
                                      " fields after " +
                                      std::string(line.tokens[0]));
  }
}

}  // namespace

NetworkInstance parse_instance(std::string_view text) {
  std::vector<Line> lines = Tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty instance");
  const Line& header = lines.front();
  if (header.tokens[0] != "NETWORK") {
    throw ParseError(header.number, "expected NETWORK header");
  }
  ExpectArity(header, 7);
  NetworkInstance inst;
  inst.num_nodes = static_cast<int>(ToInt(header, 1, "node count"));
  int64_t num_links = ToInt(header, 2, "link count");
  int64_t num_demands = ToInt(header, 3, "demand count");
  inst.num_wavelengths = static_cast<int>(ToInt(header, 4, "wavelength count"));
  inst.capacity = ToInt(header, 5, "capacity");
  inst.reach_km = ToInt(header, 6, "reach");
  if (inst.num_nodes < 1) throw ParseError(header.number, "no nodes");
  if (num_links < 0 || num_demands < 0) {
    throw ParseError(header.number, "negative count");
  }
  if (inst.num_wavelengths < 1 || inst.num_wavelengths > kMaxWavelengths) {
    throw ParseError(header.number, "wavelength count out of range");
  }
  if (inst.capacity <= 0) throw ParseError(header.number, "capacity must be positive");
  if (inst.reach_km <= 0) throw ParseError(header.number, "reach must be positive");

  auto node = [&](const Line& line, size_t i, const char* what) {
    int64_t v = ToInt(line, i, what);
    if (v < 0 || v >= inst.num_nodes) {
      throw ParseError(line.number, std::string("unknown node for ") + what);
    }
    return static_cast<int>(v);
  };

  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    std::string_view kind = line.tokens[0];
    if (kind == "LINK") {
      ExpectArity(line, 5);
      Link link;
      link.id = static_cast<int>(ToInt(line, 1, "link id"));
      if (link.id != inst.num_links()) {
        throw ParseError(line.number, "link ids must be dense and ascending");
      }
      if (!inst.demands.empty()) {
        throw ParseError(line.number, "LINK after DEMAND");
      }
      link.a = node(line, 2, "link endpoint");
      link.b = node(line, 3, "link endpoint");
      link.length_km = ToInt(line, 4, "link length");
      if (link.a == link.b) throw ParseError(line.number, "self-loop link");
      if (link.length_km <= 0) throw ParseError(line.number, "non-positive length");
      inst.links.push_back(link);
    } else if (kind == "DEMAND") {
      ExpectArity(line, 5);
      Demand d;
      d.id = static_cast<int>(ToInt(line, 1, "demand id"));
      if (d.id != static_cast<int>(inst.demands.size())) {
        throw ParseError(line.number, "demand ids must be dense and ascending");
      }
      d.source = node(line, 2, "demand source");
      d.target = node(line, 3, "demand target");
      d.volume = ToInt(line, 4, "demand volume");
      if (d.source == d.target) throw ParseError(line.number, "equal terminals");
      if (d.volume <= 0) throw ParseError(line.number, "non-positive volume");
      if (d.volume > inst.capacity) {
        throw ParseError(line.number, "demand volume " +
                                          std::to_string(d.volume) +
                                          " exceeds capacity " +
                                          std::to_string(inst.capacity));
      }
      d.origins = {d.id};
      inst.demands.push_back(std::move(d));
    } else {
      throw ParseError(line.number, "unknown record '" + std::string(kind) + "'");
    }
  }
  int last = lines.back().number;
  if (inst.num_links() != num_links) {
    throw ParseError(last, "header announces " + std::to_string(num_links) +
                               " links, found " +
                               std::to_string(inst.num_links()));
  }
  if (static_cast<int64_t>(inst.demands.size()) != num_demands) {
    throw ParseError(last, "header announces " + std::to_string(num_demands) +
                               " demands, found " +
                               std::to_string(inst.demands.size()));
  }
  return inst;
}

std::string serialize_instance(const NetworkInstance& inst) {
  std::ostringstream os;
  os << "NETWORK " << inst.num_nodes << ' ' << inst.num_links() << ' '
     << inst.demands.size() << ' ' << inst.num_wavelengths << ' '
     << inst.capacity << ' ' << inst.reach_km << '\n';
  for (const Link& l : inst.links) {
    os << "LINK " << l.id << ' ' << l.a << ' ' << l.b << ' ' << l.length_km
       << '\n';
  }
  for (const Demand& d : inst.demands) {
    os << "DEMAND " << d.id << ' ' << d.source << ' ' << d.target << ' '
       << d.volume << '\n';
  }
  return os.str();
}

namespace {

void WriteIds(std::ostream& os, const std::vector<int>& ids) {
  for (int id : ids) os << ' ' << id;
  os << '\n';
}

// Derives the node sequence when the links form a connected chain; leaves
// `nodes` empty otherwise. Limits are the verifier's business.
void DeriveNodes(const NetworkInstance& inst, Lightpath& lp) {
  lp.nodes.clear();
  lp.length_km = 0;
  if (lp.links.empty()) return;
  const Link& first = inst.links[lp.links.front()];
  int start = first.a;
  if (lp.links.size() > 1) {
    const Link& second = inst.links[lp.links[1]];
    start = second.touches(first.b) ? first.a : first.b;
  }
  std::vector<int> nodes{start};
  int64_t length = 0;
  int cur = start;
  for (int e : lp.links) {
    const Link& link = inst.links[e];
    if (!link.touches(cur)) return;
    cur = link.other(cur);
    nodes.push_back(cur);
    length += link.length_km;
  }
  lp.nodes = std::move(nodes);
  lp.length_km = length;
}

}  // namespace

std::string write_solution(const Solution& solution) {
  std::ostringstream os;
  os << "LIGHTPATHS " << solution.lightpaths.size() << '\n';
  for (const Lightpath& lp : solution.lightpaths) {
    os << "LP " << lp.id << ' ' << lp.wavelength;
    WriteIds(os, lp.links);
  }
  for (const DemandPlan& plan : solution.plans) {
    os << "WORK " << plan.demand;
    WriteIds(os, plan.working);
    for (const auto& [e1, route] : plan.level1) {
      os << "L1 " << plan.demand << ' ' << e1;
      WriteIds(os, route);
    }
    for (const auto& [key, route] : plan.level2) {
      os << "L2 " << plan.demand << ' ' << key.first << ' ' << key.second;
      WriteIds(os, route);
    }
  }
  return os.str();
}

Solution read_solution(std::string_view text, const NetworkInstance& inst) {
  std::vector<Line> lines = Tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty solution");
  const Line& header = lines.front();
  if (header.tokens[0] != "LIGHTPATHS") {
    throw ParseError(header.number, "expected LIGHTPATHS header");
  }
  ExpectArity(header, 2);
  int64_t announced = ToInt(header, 1, "lightpath count");

  Solution sol;
  std::unordered_set<int> lp_ids;
  std::unordered_set<int> planned;
  auto link_id = [&](const Line& line, size_t i) {
    int64_t e = ToInt(line, i, "link id");
    if (e < 0 || e >= inst.num_links()) {
      throw ParseError(line.number, "unknown link " + std::to_string(e));
    }
    return static_cast<int>(e);
  };
  auto route = [&](const Line& line, size_t from) {
    if (from >= line.tokens.size()) throw ParseError(line.number, "empty route");
    Route r;
    for (size_t i = from; i < line.tokens.size(); ++i) {
      int64_t id = ToInt(line, i, "lightpath id");
      if (!lp_ids.count(static_cast<int>(id))) {
        throw ParseError(line.number,
                         "unknown lightpath id " + std::to_string(id));
      }
      r.push_back(static_cast<int>(id));
    }
    return r;
  };
  auto plan_for = [&](const Line& line) -> DemandPlan& {
    int64_t k = ToInt(line, 1, "demand id");
    if (sol.plans.empty() || sol.plans.back().demand != k) {
      throw ParseError(line.number, "route record for demand " +
                                        std::to_string(k) +
                                        " outside its WORK block");
    }
    return sol.plans.back();
  };

  for (size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    std::string_view kind = line.tokens[0];
    if (kind == "LP") {
      if (!sol.plans.empty()) throw ParseError(line.number, "LP after routes");
      if (line.tokens.size() < 4) throw ParseError(line.number, "LP needs links");
      Lightpath lp;
      int64_t id = ToInt(line, 1, "lightpath id");
      if (id < 0 || id > std::numeric_limits<int>::max()) {
        throw ParseError(line.number, "lightpath id out of range");
      }
      lp.id = static_cast<int>(id);
      if (!lp_ids.insert(lp.id).second) {
        throw ParseError(line.number, "duplicate lightpath id " + std::to_string(id));
      }
      lp.wavelength = static_cast<int>(ToInt(line, 2, "wavelength"));
      for (size_t j = 3; j < line.tokens.size(); ++j) {
        lp.links.push_back(link_id(line, j));
      }
      DeriveNodes(inst, lp);
      sol.lightpaths.push_back(std::move(lp));
    } else if (kind == "WORK") {
      int64_t k = ToInt(line, 1, "demand id");
      if (k < 0 || k >= static_cast<int64_t>(inst.demands.size())) {
        throw ParseError(line.number, "unknown demand " + std::to_string(k));
      }
      if (!planned.insert(static_cast<int>(k)).second) {
        throw ParseError(line.number, "duplicate WORK for demand " + std::to_string(k));
      }
      if (!sol.plans.empty() && sol.plans.back().demand > k) {
        throw ParseError(line.number, "demands must be ascending");
      }
      DemandPlan plan;
      plan.demand = static_cast<int>(k);
      plan.working = route(line, 2);
      sol.plans.push_back(std::move(plan));
    } else if (kind == "L1") {
      DemandPlan& plan = plan_for(line);
      int e1 = link_id(line, 2);
      if (!plan.level1.emplace(e1, route(line, 3)).second) {
        throw ParseError(line.number, "duplicate L1 record");
      }
    } else if (kind == "L2") {
      DemandPlan& plan = plan_for(line);
      int e1 = link_id(line, 2);
      int e2 = link_id(line, 3);
      if (e1 == e2) throw ParseError(line.number, "L2 needs two distinct links");
      if (!plan.level2.emplace(std::make_pair(e1, e2), route(line, 4)).second) {
        throw ParseError(line.number, "duplicate L2 record");
      }
    } else {
      throw ParseError(line.number, "unknown record '" + std::string(kind) + "'");
    }
  }
  if (static_cast<int64_t>(sol.lightpaths.size()) != announced) {
    throw ParseError(header.number, "header announces " +
                                        std::to_string(announced) +
                                        " lightpaths, found " +
                                        std::to_string(sol.lightpaths.size()));
  }
  return sol;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

// ---------------------------------------------------------------------------
// Generator

namespace {

// Uniform integer in [0, n) from raw engine output; avoids the
// implementation-defined std::uniform_int_distribution.
uint64_t Uniform(std::mt19937_64& rng, uint64_t n) {
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

struct UnionFind {
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int Find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool Unite(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

// Number of edge-disjoint s-t paths, capped at `cap`.
int EdgeDisjointPaths(int n, const std::vector<Link>& links, int s, int t,
                      int cap) {
  // Undirected unit capacities: residual flow per link direction.
  std::vector<std::vector<int>> inc(n);
  for (const Link& l : links) {
    inc[l.a].push_back(l.id);
    inc[l.b].push_back(l.id);
  }
  std::vector<int> flow(links.size(), 0);  // +1: a->b, -1: b->a
  int found = 0;
  while (found < cap) {
    std::vector<int> via(n, -1);
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty() && !seen[t]) {
      int u = q.front();
      q.pop();
      for (int e : inc[u]) {
        const Link& l = links[e];
        int v = l.other(u);
        int dir = (u == l.a) ? 1 : -1;
        if (flow[e] == dir || seen[v]) continue;
        seen[v] = 1;
        via[v] = e;
        q.push(v);
      }
    }
    if (!seen[t]) break;
    for (int v = t; v != s;) {
      int e = via[v];
      const Link& l = links[e];
      int u = l.other(v);
      flow[e] += (u == l.a) ? 1 : -1;
      v = u;
    }
    ++found;
  }
  return found;
}

}  // namespace

GeneratedInstance generate_instance(const GeneratorConfig& cfg) {
  const int n = cfg.nodes;
  if (n < 4) throw std::invalid_argument("generator needs at least 4 nodes");
  if (cfg.links < n - 1) {
    throw std::invalid_argument("link count below spanning-tree size");
  }
  if (2 * static_cast<int64_t>(cfg.links) < 3 * static_cast<int64_t>(n)) {
    throw std::invalid_argument("link count must be at least 1.5 x node count");
  }
  if (static_cast<int64_t>(cfg.links) > static_cast<int64_t>(n) * (n - 1) / 2) {
    throw std::invalid_argument("link count exceeds simple-graph maximum");
  }
  if (cfg.demands < 0) throw std::invalid_argument("negative demand count");
  if (cfg.volumes.empty()) throw std::invalid_argument("empty volume list");
  for (int64_t v : cfg.volumes) {
    if (v <= 0 || v > cfg.capacity) {
      throw std::invalid_argument("volume choice outside (0, capacity]");
    }
  }
  if (cfg.reach_km <= 0 || cfg.capacity <= 0 || cfg.wavelengths < 1 ||
      cfg.wavelengths > kMaxWavelengths) {
    throw std::invalid_argument("reach, capacity and wavelengths must be valid");
  }

  std::mt19937_64 rng(cfg.seed);

  // Nodes on distinct cells of a square grid, jittered inside the cell.
  constexpr int64_t kCell = 1000;
  int side = 1;
  while (side * side < n) ++side;
  std::vector<int> cells(side * side);
  std::iota(cells.begin(), cells.end(), 0);
  for (size_t i = cells.size() - 1; i > 0; --i) {
    std::swap(cells[i], cells[Uniform(rng, i + 1)]);
  }
  std::vector<int64_t> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = (cells[i] % side) * kCell + static_cast<int64_t>(Uniform(rng, 601)) - 300;
    y[i] = (cells[i] / side) * kCell + static_cast<int64_t>(Uniform(rng, 601)) - 300;
  }

  struct Pair {
    int64_t d2;
    int a, b;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      int64_t dx = x[a] - x[b], dy = y[a] - y[b];
      pairs.push_back({dx * dx + dy * dy, a, b});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) {
    return std::tie(p.d2, p.a, p.b) < std::tie(q.d2, q.a, q.b);
  });

  std::vector<char> used(pairs.size(), 0);
  std::vector<int> degree(n, 0);
  std::vector<size_t> chosen;
  auto take = [&](size_t i) {
    used[i] = 1;
    ++degree[pairs[i].a];
    ++degree[pairs[i].b];
    chosen.push_back(i);
  };

  // Minimum spanning tree.
  UnionFind uf(n);
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (uf.Unite(pairs[i].a, pairs[i].b)) take(i);
  }
  // Raise every node to degree 3 using its nearest free partners, preferring
  // partners that are themselves short of degree.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[Uniform(rng, i + 1)]);
  for (int u : order) {
    while (degree[u] < 3 && static_cast<int>(chosen.size()) < cfg.links) {
      size_t best = pairs.size(), fallback = pairs.size();
      for (size_t i = 0; i < pairs.size(); ++i) {
        if (used[i] || (pairs[i].a != u && pairs[i].b != u)) continue;
        int v = pairs[i].a == u ? pairs[i].b : pairs[i].a;
        if (fallback == pairs.size()) fallback = i;
        if (degree[v] < 3) {
          best = i;
          break;
        }
      }
      size_t pick = best != pairs.size() ? best : fallback;
      if (pick == pairs.size()) break;
      take(pick);
    }
  }
  // Fill up with short links, choosing among the few shortest remaining.
  while (static_cast<int>(chosen.size()) < cfg.links) {
    std::vector<size_t> window;
    for (size_t i = 0; i < pairs.size() && window.size() < 6; ++i) {
      if (!used[i]) window.push_back(i);
    }
    take(window[Uniform(rng, window.size())]);
  }
  std::sort(chosen.begin(), chosen.end());

  GeneratedInstance out;
  NetworkInstance& inst = out.instance;
  inst.num_nodes = n;
  inst.num_wavelengths = cfg.wavelengths;
  inst.capacity = cfg.capacity;
  inst.reach_km = cfg.reach_km;
  std::vector<int64_t> raw;
  for (size_t i : chosen) {
    Link l;
    l.id = inst.num_links();
    l.a = pairs[i].a;
    l.b = pairs[i].b;
    l.length_km = std::max<int64_t>(
        1, std::llround(std::sqrt(static_cast<double>(pairs[i].d2))));
    inst.links.push_back(l);
  }

  // Scale lengths so the median shortest-path length is about reach / 2.
  {
    std::vector<std::vector<int>> inc = inst.incidence();
    std::vector<int64_t> all;
    for (int s = 0; s < n; ++s) {
      std::vector<int64_t> dist(n, std::numeric_limits<int64_t>::max());
      using Item = std::pair<int64_t, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[s] = 0;
      pq.push({0, s});
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u]) continue;
        for (int e : inc[u]) {
          const Link& l = inst.links[e];
          int v = l.other(u);
          if (d + l.length_km < dist[v]) {
            dist[v] = d + l.length_km;
            pq.push({dist[v], v});
          }
        }
      }
      for (int t = s + 1; t < n; ++t) all.push_back(dist[t]);
    }
    std::nth_element(all.begin(), all.begin() + all.size() / 2, all.end());
    int64_t median = std::max<int64_t>(1, all[all.size() / 2]);
    for (Link& l : inst.links) {
      int64_t scaled = (l.length_km * cfg.reach_km + median) / (2 * median);
      l.length_km = std::clamp<int64_t>(scaled, 1, cfg.reach_km);
    }
  }

  // Demands between random terminal pairs that survive any two link cuts.
  constexpr int kAttempts = 64;
  for (int k = 0; k < cfg.demands; ++k) {
    Demand d;
    d.id = k;
    bool robust = false;
    for (int attempt = 0; attempt < kAttempts && !robust; ++attempt) {
      d.source = static_cast<int>(Uniform(rng, n));
      d.target = static_cast<int>(Uniform(rng, n - 1));
      if (d.target >= d.source) ++d.target;
      robust = EdgeDisjointPaths(n, inst.links, d.source, d.target, 3) >= 3;
    }
    if (!robust) {
      out.survivable = false;
      ++out.fragile_demands;
    }
    d.volume = cfg.volumes[Uniform(rng, cfg.volumes.size())];
    d.origins = {k};
    inst.demands.push_back(std::move(d));
  }
  return out;
}

}  // namespace stg2
