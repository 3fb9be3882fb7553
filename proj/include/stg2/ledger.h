#ifndef STG2_LEDGER_H
#define STG2_LEDGER_H

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "stg2/core_model.h"

namespace stg2 {

// Raised when the ledger is used out of the working -> level-1 -> level-2
// order, or a commit breaks a precondition.
class LedgerContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Phase : uint8_t { kWorking, kLevel1, kLevel2 };

struct CapacityQuery {
  Scenario scenario;
  int demand = 0;
  int lightpath = 0;
  int64_t load = 0;  // C(l, scenario) as seen by the check
  bool admitted = false;
};

// Receives every partial check and commit. Only used by sequential solves.
class LedgerObserver {
 public:
  virtual ~LedgerObserver() = default;
  virtual void on_query(const CapacityQuery&) {}
  virtual void on_commit(int /*demand*/, int64_t /*volume*/,
                         const Scenario& /*scenario*/,
                         std::span<const int> /*lightpaths*/,
                         std::span<const int> /*route_links*/) {}
  virtual void on_phase(Phase) {}
};

// Per-lightpath bandwidth accounting: C00, sparse level-1 increments
// Delta(l, e1), sparse over-reservations delta(l, (e1, e2)) and the working
// usage bits y00(k, l). Capacities and volumes are integer Gbps.
class Ledger {
 public:
  Ledger(int num_links, int num_demands, int64_t capacity);

  Phase phase() const { return phase_; }
  // Moves forward by exactly one phase; anything else throws.
  void advance(Phase next);
  void set_observer(LedgerObserver* observer) { observer_ = observer; }
  LedgerObserver* observer() const { return observer_; }

  int num_links() const { return num_links_; }
  int64_t capacity() const { return capacity_; }

  int64_t working_load(int l) const {
    return static_cast<size_t>(l) < c00_.size() ? c00_[l] : 0;
  }
  int64_t level1_increment(int l, int e1) const;
  int64_t over_reservation(int l, const Scenario& s) const;
  bool uses_working(int demand, int l) const;

  // C(l, (e1, 0)) = C00 + Delta.
  int64_t level1_load(int l, int e1) const {
    return working_load(l) + level1_increment(l, e1);
  }
  // C(l, (e1, e2)) at the start of planning that scenario.
  int64_t level2_base(int l, const Scenario& s) const {
    return level1_load(l, s.first) - over_reservation(l, s);
  }

  bool check_working(int demand, int64_t volume, int l) const;
  bool check_level1(int demand, int64_t volume, int l, int e1) const;

  // `route_links` is E(r), sorted and unique.
  void commit_working(int demand, int64_t volume, std::span<const int> lightpaths,
                      std::span<const int> route_links);
  void commit_level1(int demand, int64_t volume, int e1,
                     std::span<const int> lightpaths,
                     std::span<const int> route_links);

  // Number of stored (lightpath, key) entries in Delta and delta.
  size_t sparse_entries() const { return delta_.size() + over_.size(); }

 private:
  friend class LevelTwoView;

  static uint64_t Key(int l, uint64_t k) {
    return (static_cast<uint64_t>(l) << 32) | k;
  }
  void Grow(int l);
  void Require(Phase p, const char* what) const;

  int num_links_;
  int num_demands_;
  int64_t capacity_;
  Phase phase_ = Phase::kWorking;
  LedgerObserver* observer_ = nullptr;
  std::vector<int64_t> c00_;
  std::vector<std::vector<uint64_t>> y00_;
  std::vector<std::vector<int>> working_links_;
  std::unordered_map<uint64_t, int64_t> delta_;
  std::unordered_map<uint64_t, int64_t> over_;
  std::unique_ptr<std::atomic<uint8_t>[]> open_;
};

// Bandwidth consumption of one level-2 scenario while it is being planned.
// Reads the base ledger lazily and keeps its own commits local, so the base
// is never modified. Opening a second view of the same scenario throws.
class LevelTwoView {
 public:
  LevelTwoView(const Ledger& ledger, const Scenario& scenario);
  // Starts from recorded loads instead of the base ledger. Lightpaths beyond
  // the snapshot start empty.
  LevelTwoView(const Ledger& ledger, const Scenario& scenario,
               std::vector<int64_t> snapshot);
  ~LevelTwoView();
  LevelTwoView(const LevelTwoView&) = delete;
  LevelTwoView& operator=(const LevelTwoView&) = delete;

  const Scenario& scenario() const { return scenario_; }
  int64_t load(int l) const;
  bool check(int demand, int64_t volume, int l) const;
  void commit(int demand, int64_t volume, std::span<const int> lightpaths,
              std::span<const int> route_links = {});
  // Dense loads of lightpaths [0, num_lightpaths).
  std::vector<int64_t> snapshot(int num_lightpaths) const;
  // Local entries, for memory accounting.
  size_t local_entries() const { return local_.size(); }
  void close();

 private:
  void Open();

  const Ledger* ledger_;
  Scenario scenario_;
  bool from_snapshot_ = false;
  bool open_ = false;
  std::vector<int64_t> snapshot_;
  std::unordered_map<int, int64_t> local_;
};

}  // namespace stg2

#endif  // STG2_LEDGER_H
