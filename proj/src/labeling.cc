#include "stg2/labeling.h"

#include <algorithm>

namespace stg2 {

Dominance dominate(const Label& l1, Label& l2, bool logical_node,
                   bool condition_v) {
  if (l1.node != l2.node || l1.cost > l2.cost) return Dominance::kNone;
  if (logical_node) return Dominance::kRemove;
  if (l1.seg_length > l2.seg_length) return Dominance::kNone;
  if (condition_v) return Dominance::kRemove;
  l2.free -= l1.free;
  return l2.free.empty() ? Dominance::kRemove : Dominance::kShrink;
}

LabelSearch::LabelSearch(const Lbag& lbag, const MinHopTable& hops,
                         const SearchContext& ctx)
    : lbag_(lbag),
      hops_(hops),
      ctx_(ctx),
      stored_(lbag.graph_nodes()),
      in_v_(lbag.num_nodes(), 0),
      in_seg_(lbag.num_nodes(), 0),
      in_u_(lbag.instance().num_links(), 0),
      used_lp_(lbag.lightpaths().size(), 0) {
  WavelengthSet common = WavelengthSet::All(lbag.instance().num_wavelengths);
  for (int e = 0; e < lbag.instance().num_links(); ++e) {
    if (ctx.scenario.fails(e)) continue;
    const WavelengthSet& w = lbag.free_wavelengths(e);
    if (!w.empty()) common &= w;
  }
  condition_v_ = !common.empty();
}

int LabelSearch::seed() {
  Label root;
  root.node = lbag_.logical(ctx_.source);
  uint16_t h = hops_(ctx_.source, ctx_.target);
  root.cost = h == MinHopTable::kInfinity ? 0 : h;
  root.free = WavelengthSet::All(lbag_.instance().num_wavelengths);
  root.seq = 0;
  labels_.push_back(root);
  return 0;
}

void LabelSearch::Mark(int index) {
  if (marked_ == index) return;
  marked_ = index;
  ++epoch_;
  in_v_[ctx_.source] = epoch_;
  const Label& top = labels_[index];
  if (!lbag_.is_logical(top.node)) {
    in_seg_[top.node] = epoch_;
    for (int i = index; !labels_[i].is_root() &&
                        labels_[i].arc.kind == ArcKind::kPhysical;
         i = labels_[i].parent) {
      in_seg_[labels_[i].arc.tail] = epoch_;
    }
  }
  for (int i = index; !labels_[i].is_root(); i = labels_[i].parent) {
    const Arc& a = labels_[i].arc;
    if (a.kind == ArcKind::kPhysical) {
      in_v_[a.head] = epoch_;
      in_u_[a.ref] = epoch_;
    } else if (a.kind == ArcKind::kLogical) {
      used_lp_[a.ref] = epoch_;
      for (int v : lbag_.lightpaths()[a.ref].nodes) in_v_[v] = epoch_;
    }
  }
}

std::optional<int> LabelSearch::extend(int index, const Arc& arc) {
  Mark(index);
  const Label& l1 = labels_[index];
  const NetworkInstance& inst = lbag_.instance();
  const bool working = ctx_.scenario.is_working();
  Label l2;
  l2.arc = arc;
  l2.node = arc.head;
  l2.parent = index;
  l2.free = WavelengthSet::All(inst.num_wavelengths);

  switch (arc.kind) {
    case ArcKind::kPhysical: {
      const Link& link = inst.links[arc.ref];
      if (ctx_.scenario.fails(arc.ref)) return std::nullopt;
      if (l1.seg_length + link.length_km > inst.reach_km) return std::nullopt;
      l2.free = l1.free & lbag_.free_wavelengths(arc.ref);
      if (l2.free.empty()) return std::nullopt;
      if (in_u_[arc.ref] == epoch_) return std::nullopt;
      if (in_seg_[arc.head] == epoch_) return std::nullopt;
      if (working && in_v_[arc.head] == epoch_) return std::nullopt;
      l2.seg_length = l1.seg_length + link.length_km;
      break;
    }
    case ArcKind::kLogical: {
      const Lightpath& lp = lbag_.lightpaths()[arc.ref];
      if (used_lp_[arc.ref] == epoch_) return std::nullopt;
      if (!ctx_.scenario.is_working()) {
        for (int e : lp.links) {
          if (ctx_.scenario.fails(e)) return std::nullopt;
        }
      }
      if (working) {
        int tail = lbag_.physical(arc.tail);
        for (int v : lp.nodes) {
          if (v != tail && in_v_[v] == epoch_) return std::nullopt;
        }
      }
      if (ctx_.capacity && !ctx_.capacity->admits(arc.ref)) return std::nullopt;
      break;
    }
    case ArcKind::kTransmitter:
      if (ctx_.frozen) return std::nullopt;
      break;
    case ArcKind::kReceiver:
      if (l1.is_root() || l1.arc.kind != ArcKind::kPhysical) return std::nullopt;
      break;
  }

  uint16_t h1 = hops_(l1.node, ctx_.target);
  uint16_t h2 = hops_(arc.head, ctx_.target);
  if (h2 == MinHopTable::kInfinity) return std::nullopt;
  l2.cost = l1.cost + lbag_.arc_cost(arc, ctx_.params, ctx_.chi) -
            (h1 == MinHopTable::kInfinity ? 0 : h1) + h2;
  l2.seq = static_cast<uint32_t>(labels_.size());
  labels_.push_back(l2);
  return static_cast<int>(labels_.size()) - 1;
}

bool LabelSearch::store(int index) {
  Label& l2 = labels_[index];
  const bool logical = lbag_.is_logical(l2.node);
  std::vector<int>& list = stored_[l2.node];
  size_t keep = 0;
  bool alive = true;
  for (size_t i = 0; i < list.size(); ++i) {
    int other = list[i];
    if (labels_[other].removed) continue;
    list[keep++] = other;
    if (alive && dominate(labels_[other], l2, logical, condition_v_) ==
                     Dominance::kRemove) {
      alive = false;
    }
  }
  list.resize(keep);
  if (!alive) {
    l2.removed = true;
    return false;
  }
  keep = 0;
  for (size_t i = 0; i < list.size(); ++i) {
    Label& other = labels_[list[i]];
    if (!other.expanded &&
        dominate(l2, other, logical, condition_v_) == Dominance::kRemove) {
      other.removed = true;
      continue;
    }
    list[keep++] = list[i];
  }
  list.resize(keep);
  list.push_back(index);
  queue_.push({l2.cost, l2.seq, index});
  return true;
}

std::vector<RoutePiece> LabelSearch::Pieces(int index) const {
  std::vector<const Label*> chain;
  for (int i = index; !labels_[i].is_root(); i = labels_[i].parent) {
    chain.push_back(&labels_[i]);
  }
  std::reverse(chain.begin(), chain.end());
  std::vector<RoutePiece> pieces;
  for (const Label* l : chain) {
    switch (l->arc.kind) {
      case ArcKind::kLogical:
        pieces.push_back({l->arc.ref, {}});
        break;
      case ArcKind::kTransmitter:
        pieces.push_back({-1, {}});
        break;
      case ArcKind::kPhysical:
        pieces.back().links.push_back(l->arc.ref);
        break;
      case ArcKind::kReceiver:
        break;
    }
  }
  return pieces;
}

SearchResult LabelSearch::run() {
  SearchResult result;
  if (labels_.empty()) {
    int root = seed();
    queue_.push({labels_[root].cost, labels_[root].seq, root});
  }
  const int target = Target();
  std::vector<Arc> arcs;
  double last = -1e300;
  while (!queue_.empty()) {
    QueueItem item = queue_.top();
    queue_.pop();
    Label& l1 = labels_[item.label];
    if (l1.removed) continue;
    if (++result.pops > ctx_.pop_limit) {
      result.status = SearchStatus::kPopLimit;
      result.labels = static_cast<int64_t>(labels_.size());
      return result;
    }
    if (item.cost < last - 1e-9) result.monotone = false;
    last = item.cost;
    l1.expanded = true;
    arcs.clear();
    lbag_.out_arcs(l1.node, !ctx_.frozen, arcs);
    for (const Arc& arc : arcs) {
      std::optional<int> child = extend(item.label, arc);
      if (!child) continue;
      if (labels_[*child].node == target) {
        result.status = SearchStatus::kFound;
        result.cost = labels_[*child].cost;
        result.pieces = Pieces(*child);
        result.labels = static_cast<int64_t>(labels_.size());
        return result;
      }
      if (!store(*child) && *child + 1 == static_cast<int>(labels_.size())) {
        labels_.pop_back();
      }
    }
  }
  result.status =
      ctx_.frozen ? SearchStatus::kFrozenExhausted : SearchStatus::kNoPath;
  result.labels = static_cast<int64_t>(labels_.size());
  return result;
}

SearchResult find_route(const Lbag& lbag, const MinHopTable& hops,
                        const SearchContext& ctx) {
  if (ctx.source == ctx.target) {
    throw StructuralError("route search with equal terminals");
  }
  LabelSearch search(lbag, hops, ctx);
  return search.run();
}

int choose_wavelength(const Lbag& lbag, std::span<const int> links) {
  WavelengthSet w = WavelengthSet::All(lbag.instance().num_wavelengths);
  for (int e : links) w &= lbag.free_wavelengths(e);
  return w.min();
}

Route realize_route(Lbag& lbag, const SearchResult& result,
                    std::vector<int>* created) {
  if (result.status != SearchStatus::kFound) {
    throw StructuralError("cannot realize a route that was not found");
  }
  Route route;
  for (const RoutePiece& piece : result.pieces) {
    if (piece.lightpath >= 0) {
      route.push_back(piece.lightpath);
      continue;
    }
    int wavelength = choose_wavelength(lbag, piece.links);
    if (wavelength < 0) {
      throw StructuralError("no common free wavelength on new segment");
    }
    const Lightpath& lp = lbag.add_lightpath(wavelength, piece.links);
    route.push_back(lp.id);
    if (created) created->push_back(lp.id);
  }
  return route;
}

}  // namespace stg2
