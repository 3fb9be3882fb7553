#ifndef STG2_LABELING_H
#define STG2_LABELING_H

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "stg2/core_model.h"
#include "stg2/lbag.h"
#include "stg2/wavelength_set.h"

namespace stg2 {

// Bandwidth admission of a lightpath for the demand being routed.
class CapacityCheck {
 public:
  virtual ~CapacityCheck() = default;
  virtual bool admits(int lightpath) const = 0;
};

struct SearchContext {
  int demand = 0;
  int source = 0;
  int target = 0;
  int64_t volume = 0;
  Scenario scenario;
  CostParams params;
  std::span<const uint8_t> chi;            // per-link mask, empty for none
  const CapacityCheck* capacity = nullptr;  // null admits every lightpath
  bool frozen = false;                      // no new lightpaths
  int64_t pop_limit = 5'000'000;
};

// Search state. V, U and the current physical segment are recovered from the
// parent chain when a label is expanded.
struct Label {
  Arc arc;             // last arc f; kind unused for the root label
  int node = 0;        // end node j
  double cost = 0;     // path cost + h(j, t')
  int64_t seg_length = 0;
  WavelengthSet free;  // W
  int parent = -1;
  uint32_t seq = 0;
  bool removed = false;
  bool expanded = false;

  bool is_root() const { return parent < 0; }
};

enum class Dominance { kNone, kShrink, kRemove };

// Applies the dominance rules of `l1` over `l2` (same end node required).
// kShrink means l2.free lost the wavelengths of l1 and is still non-empty.
Dominance dominate(const Label& l1, Label& l2, bool logical_node,
                   bool condition_v);

enum class SearchStatus { kFound, kNoPath, kFrozenExhausted, kPopLimit };

// One lightpath of a found route: an existing lightpath id, or -1 with the
// link sequence of a lightpath to establish.
struct RoutePiece {
  int lightpath = -1;
  std::vector<int> links;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kNoPath;
  std::vector<RoutePiece> pieces;  // from source to target
  double cost = 0;
  int64_t pops = 0;
  int64_t labels = 0;
  bool monotone = true;  // popped estimates never decreased
};

class LabelSearch {
 public:
  LabelSearch(const Lbag& lbag, const MinHopTable& hops,
              const SearchContext& ctx);

  // Creates the root label at s'. Returns its index.
  int seed();
  // Checks the feasibility conditions for extending `label` along `arc` and
  // returns the index of the new label. Dominance is not applied.
  std::optional<int> extend(int label, const Arc& arc);
  // Applies dominance between the new label and the stored labels at its
  // node, stores it if it survives, and returns whether it was stored.
  bool store(int label);

  const Label& label(int i) const { return labels_[i]; }
  Label& label(int i) { return labels_[i]; }
  bool condition_v() const { return condition_v_; }

  SearchResult run();

 private:
  void Mark(int label);
  std::vector<RoutePiece> Pieces(int label) const;
  int Target() const { return lbag_.logical(ctx_.target); }

  const Lbag& lbag_;
  const MinHopTable& hops_;
  const SearchContext& ctx_;
  bool condition_v_ = false;
  int marked_ = -1;

  std::vector<Label> labels_;
  std::vector<std::vector<int>> stored_;
  struct QueueItem {
    double cost;
    uint32_t seq;
    int label;
    bool operator>(const QueueItem& o) const {
      return cost != o.cost ? cost > o.cost : seq > o.seq;
    }
  };
  std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue_;

  uint32_t epoch_ = 0;
  std::vector<uint32_t> in_v_;    // physical nodes on the path
  std::vector<uint32_t> in_seg_;  // physical nodes of the current segment
  std::vector<uint32_t> in_u_;    // links of traversed physical arcs
  std::vector<uint32_t> used_lp_;
};

SearchResult find_route(const Lbag& lbag, const MinHopTable& hops,
                        const SearchContext& ctx);

// Smallest wavelength free on every link, or -1.
int choose_wavelength(const Lbag& lbag, std::span<const int> links);

// Establishes the new lightpaths of a found route and returns its lightpath
// ids. `created` receives the ids of new lightpaths when not null.
Route realize_route(Lbag& lbag, const SearchResult& result,
                    std::vector<int>* created = nullptr);

}  // namespace stg2

#endif  // STG2_LABELING_H
