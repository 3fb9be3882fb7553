#ifndef STG2_LBAG_H
#define STG2_LBAG_H

#include <cstdint>
#include <span>
#include <vector>

#include "stg2/core_model.h"
#include "stg2/wavelength_set.h"

namespace stg2 {

enum class ArcKind : uint8_t { kPhysical, kLogical, kTransmitter, kReceiver };

// Graph nodes: physical node i is i, its logical copy i' is num_nodes + i.
// `ref` is the link id of a physical arc, the lightpath id of a logical arc
// and -1 otherwise.
struct Arc {
  ArcKind kind = ArcKind::kPhysical;
  int tail = 0;
  int head = 0;
  int ref = -1;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct CostParams {
  double alpha = 32;
  double beta = 32;
  double gamma = 2;
  double theta = 3;
};

struct ArcCounts {
  int64_t physical = 0;
  int64_t logical = 0;
  int64_t transmitter = 0;
  int64_t receiver = 0;
};

// Unweighted hop distances between physical nodes, extended to logical copies.
class MinHopTable {
 public:
  static constexpr uint16_t kInfinity = 0xFFFF;

  MinHopTable() = default;
  explicit MinHopTable(const NetworkInstance& instance);

  // Accepts physical or logical graph node ids.
  uint16_t operator()(int u, int v) const {
    if (u >= n_) u -= n_;
    if (v >= n_) v -= n_;
    return table_[static_cast<size_t>(u) * n_ + v];
  }
  int num_nodes() const { return n_; }

 private:
  int n_ = 0;
  std::vector<uint16_t> table_;
};

class Lbag {
 public:
  explicit Lbag(const NetworkInstance& instance);

  const NetworkInstance& instance() const { return *instance_; }
  int num_nodes() const { return instance_->num_nodes; }
  int graph_nodes() const { return 2 * instance_->num_nodes; }
  bool is_logical(int node) const { return node >= instance_->num_nodes; }
  int logical(int node) const { return node + instance_->num_nodes; }
  int physical(int node) const {
    return node >= instance_->num_nodes ? node - instance_->num_nodes : node;
  }

  // Establishes a lightpath with id == lightpaths().size(). Throws
  // StructuralError if the wavelength is already used on one of its links or
  // the path is invalid.
  const Lightpath& add_lightpath(int wavelength, std::vector<int> links);

  const std::vector<Lightpath>& lightpaths() const { return lightpaths_; }
  const WavelengthSet& free_wavelengths(int link) const { return free_[link]; }
  // Lightpath ids with an endpoint at physical node `node`, in id order.
  const std::vector<int>& lightpaths_at(int node) const {
    return terminating_[node];
  }
  const std::vector<int>& links_at(int node) const { return incidence_[node]; }

  ArcCounts arc_counts() const;
  std::vector<Arc> arcs() const;
  // Outgoing arcs of graph node `node`. Transmitter arcs are skipped when
  // `with_transmitters` is false.
  void out_arcs(int node, bool with_transmitters, std::vector<Arc>& out) const;

  // `chi` is a per-link 0/1 mask, or empty for the empty set.
  double arc_cost(const Arc& arc, const CostParams& params,
                  std::span<const uint8_t> chi = {}) const;

 private:
  const NetworkInstance* instance_;
  std::vector<std::vector<int>> incidence_;
  std::vector<WavelengthSet> free_;
  std::vector<Lightpath> lightpaths_;
  std::vector<std::vector<int>> terminating_;
};

}  // namespace stg2

#endif  // STG2_LBAG_H
