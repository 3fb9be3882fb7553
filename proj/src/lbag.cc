#include "stg2/lbag.h"

#include <cmath>
#include <queue>

namespace stg2 {

MinHopTable::MinHopTable(const NetworkInstance& instance)
    : n_(instance.num_nodes),
      table_(static_cast<size_t>(n_) * n_, kInfinity) {
  std::vector<std::vector<int>> adj(n_);
  for (const Link& l : instance.links) {
    adj[l.a].push_back(l.b);
    adj[l.b].push_back(l.a);
  }
  std::vector<int> queue(n_);
  for (int s = 0; s < n_; ++s) {
    uint16_t* row = &table_[static_cast<size_t>(s) * n_];
    row[s] = 0;
    size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      int u = queue[head++];
      for (int v : adj[u]) {
        if (row[v] != kInfinity) continue;
        row[v] = row[u] + 1;
        queue[tail++] = v;
      }
    }
  }
}

Lbag::Lbag(const NetworkInstance& instance)
    : instance_(&instance),
      incidence_(instance.incidence()),
      free_(instance.links.size(), WavelengthSet::All(instance.num_wavelengths)),
      terminating_(instance.num_nodes) {}

const Lightpath& Lbag::add_lightpath(int wavelength, std::vector<int> links) {
  Lightpath lp = make_lightpath(*instance_, static_cast<int>(lightpaths_.size()),
                                wavelength, std::move(links));
  for (int e : lp.links) {
    if (!free_[e].contains(wavelength)) {
      throw StructuralError("wavelength " + std::to_string(wavelength) +
                            " already occupied on link " + std::to_string(e));
    }
  }
  for (int e : lp.links) free_[e].erase(wavelength);
  terminating_[lp.a()].push_back(lp.id);
  terminating_[lp.b()].push_back(lp.id);
  lightpaths_.push_back(std::move(lp));
  return lightpaths_.back();
}

ArcCounts Lbag::arc_counts() const {
  ArcCounts c;
  c.physical = 2 * static_cast<int64_t>(instance_->links.size());
  c.logical = 2 * static_cast<int64_t>(lightpaths_.size());
  c.transmitter = instance_->num_nodes;
  c.receiver = instance_->num_nodes;
  return c;
}

std::vector<Arc> Lbag::arcs() const {
  std::vector<Arc> out;
  for (int v = 0; v < graph_nodes(); ++v) out_arcs(v, true, out);
  return out;
}

void Lbag::out_arcs(int node, bool with_transmitters,
                    std::vector<Arc>& out) const {
  const int n = instance_->num_nodes;
  if (node < n) {
    for (int e : incidence_[node]) {
      out.push_back({ArcKind::kPhysical, node,
                     instance_->links[e].other(node), e});
    }
    out.push_back({ArcKind::kReceiver, node, node + n, -1});
    return;
  }
  int i = node - n;
  for (int id : terminating_[i]) {
    out.push_back({ArcKind::kLogical, node, lightpaths_[id].other_end(i) + n, id});
  }
  if (with_transmitters) out.push_back({ArcKind::kTransmitter, node, i, -1});
}

double Lbag::arc_cost(const Arc& arc, const CostParams& p,
                      std::span<const uint8_t> chi) const {
  switch (arc.kind) {
    case ArcKind::kTransmitter:
      return p.alpha;
    case ArcKind::kReceiver:
      return 0;
    case ArcKind::kPhysical: {
      double used = 1.0 - static_cast<double>(free_[arc.ref].size()) /
                              instance_->num_wavelengths;
      double c = 1.0 + p.beta * std::pow(used, p.theta);
      if (!chi.empty() && chi[arc.ref]) c += p.gamma;
      return c;
    }
    case ArcKind::kLogical: {
      const Lightpath& lp = lightpaths_[arc.ref];
      double c = static_cast<double>(lp.links.size());
      if (!chi.empty()) {
        int hit = 0;
        for (int e : lp.links) hit += chi[e] ? 1 : 0;
        c += p.gamma * hit;
      }
      return c;
    }
  }
  return 0;
}

}  // namespace stg2
