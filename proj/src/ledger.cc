#include "stg2/ledger.h"

#include <algorithm>
#include <string>

namespace stg2 {

Ledger::Ledger(int num_links, int num_demands, int64_t capacity)
    : num_links_(num_links),
      num_demands_(num_demands),
      capacity_(capacity),
      working_links_(num_demands) {}

void Ledger::advance(Phase next) {
  if (static_cast<int>(next) != static_cast<int>(phase_) + 1) {
    throw LedgerContractError("ledger phases advance one step at a time");
  }
  phase_ = next;
  if (next == Phase::kLevel2) {
    size_t n = static_cast<size_t>(num_links_) * num_links_;
    open_ = std::make_unique<std::atomic<uint8_t>[]>(n);
    for (size_t i = 0; i < n; ++i) open_[i].store(0, std::memory_order_relaxed);
  }
  if (observer_) observer_->on_phase(next);
}

void Ledger::Require(Phase p, const char* what) const {
  if (phase_ != p) {
    throw LedgerContractError(std::string(what) +
                              " called outside its planning phase");
  }
}

void Ledger::Grow(int l) {
  if (static_cast<size_t>(l) >= c00_.size()) {
    c00_.resize(l + 1, 0);
    y00_.resize(l + 1);
  }
  if (y00_[l].empty()) y00_[l].assign((num_demands_ + 63) / 64, 0);
}

int64_t Ledger::level1_increment(int l, int e1) const {
  auto it = delta_.find(Key(l, static_cast<uint32_t>(e1)));
  return it == delta_.end() ? 0 : it->second;
}

int64_t Ledger::over_reservation(int l, const Scenario& s) const {
  auto it = over_.find(Key(l, s.index(num_links_)));
  return it == over_.end() ? 0 : it->second;
}

bool Ledger::uses_working(int demand, int l) const {
  if (static_cast<size_t>(l) >= y00_.size() || y00_[l].empty()) return false;
  return (y00_[l][demand >> 6] >> (demand & 63)) & 1;
}

bool Ledger::check_working(int demand, int64_t volume, int l) const {
  Require(Phase::kWorking, "working capacity check");
  int64_t load = working_load(l);
  bool ok = load + volume <= capacity_;
  if (observer_) observer_->on_query({Scenario::Working(), demand, l, load, ok});
  return ok;
}

bool Ledger::check_level1(int demand, int64_t volume, int l, int e1) const {
  Require(Phase::kLevel1, "level-1 capacity check");
  int64_t load = level1_load(l, e1);
  int64_t add = uses_working(demand, l) ? 0 : volume;
  bool ok = load + add <= capacity_;
  if (observer_) observer_->on_query({Scenario::Level1(e1), demand, l, load, ok});
  return ok;
}

void Ledger::commit_working(int demand, int64_t volume,
                            std::span<const int> lightpaths,
                            std::span<const int> route_links) {
  Require(Phase::kWorking, "commit_working");
  if (!working_links_[demand].empty()) {
    throw LedgerContractError("demand " + std::to_string(demand) +
                              " already has a working route");
  }
  for (int l : lightpaths) {
    if (working_load(l) + volume > capacity_) {
      throw LedgerContractError("working commit overflows lightpath " +
                                std::to_string(l));
    }
  }
  for (int l : lightpaths) {
    Grow(l);
    c00_[l] += volume;
    y00_[l][demand >> 6] |= uint64_t{1} << (demand & 63);
  }
  working_links_[demand].assign(route_links.begin(), route_links.end());
  if (observer_) {
    observer_->on_commit(demand, volume, Scenario::Working(), lightpaths,
                         route_links);
  }
}

void Ledger::commit_level1(int demand, int64_t volume, int e1,
                           std::span<const int> lightpaths,
                           std::span<const int> route_links) {
  Require(Phase::kLevel1, "commit_level1");
  const std::vector<int>& work = working_links_[demand];
  if (!std::binary_search(work.begin(), work.end(), e1)) {
    throw LedgerContractError("level-1 commit for link " + std::to_string(e1) +
                              " outside the working route of demand " +
                              std::to_string(demand));
  }
  if (std::find(route_links.begin(), route_links.end(), e1) !=
      route_links.end()) {
    throw LedgerContractError("level-1 route traverses its failed link");
  }
  for (int l : lightpaths) {
    int64_t add = uses_working(demand, l) ? 0 : volume;
    if (level1_load(l, e1) + add > capacity_) {
      throw LedgerContractError("level-1 commit overflows lightpath " +
                                std::to_string(l));
    }
  }
  for (int l : lightpaths) {
    if (uses_working(demand, l)) continue;
    Grow(l);
    delta_[Key(l, static_cast<uint32_t>(e1))] += volume;
    for (int e2 : route_links) {
      over_[Key(l, Scenario::Level2(e1, e2).index(num_links_))] += volume;
    }
  }
  if (observer_) {
    observer_->on_commit(demand, volume, Scenario::Level1(e1), lightpaths,
                         route_links);
  }
}

LevelTwoView::LevelTwoView(const Ledger& ledger, const Scenario& scenario)
    : ledger_(&ledger), scenario_(scenario) {
  Open();
}

LevelTwoView::LevelTwoView(const Ledger& ledger, const Scenario& scenario,
                           std::vector<int64_t> snapshot)
    : ledger_(&ledger),
      scenario_(scenario),
      from_snapshot_(true),
      snapshot_(std::move(snapshot)) {
  Open();
}

void LevelTwoView::Open() {
  ledger_->Require(Phase::kLevel2, "level-2 view");
  if (scenario_.level() != 2 || !scenario_.valid()) {
    throw LedgerContractError("level-2 view needs a level-2 scenario");
  }
  uint8_t was = ledger_->open_[scenario_.index(ledger_->num_links_)].exchange(
      1, std::memory_order_acq_rel);
  if (was) {
    throw LedgerContractError("scenario " + to_string(scenario_) +
                              " already has an open view");
  }
  open_ = true;
}

LevelTwoView::~LevelTwoView() { close(); }

void LevelTwoView::close() {
  if (!open_) return;
  ledger_->open_[scenario_.index(ledger_->num_links_)].store(
      0, std::memory_order_release);
  open_ = false;
  local_.clear();
  snapshot_.clear();
}

int64_t LevelTwoView::load(int l) const {
  if (auto it = local_.find(l); it != local_.end()) return it->second;
  if (from_snapshot_) {
    return static_cast<size_t>(l) < snapshot_.size() ? snapshot_[l] : 0;
  }
  return ledger_->level2_base(l, scenario_);
}

bool LevelTwoView::check(int demand, int64_t volume, int l) const {
  int64_t current = load(l);
  int64_t add = ledger_->uses_working(demand, l) ? 0 : volume;
  bool ok = current + add <= ledger_->capacity_;
  if (LedgerObserver* obs = ledger_->observer_) {
    obs->on_query({scenario_, demand, l, current, ok});
  }
  return ok;
}

void LevelTwoView::commit(int demand, int64_t volume,
                          std::span<const int> lightpaths,
                          std::span<const int> route_links) {
  if (!open_) throw LedgerContractError("commit on a closed level-2 view");
  for (int l : lightpaths) {
    int64_t add = ledger_->uses_working(demand, l) ? 0 : volume;
    if (load(l) + add > ledger_->capacity_) {
      throw LedgerContractError("level-2 commit overflows lightpath " +
                                std::to_string(l));
    }
  }
  for (int l : lightpaths) {
    int64_t add = ledger_->uses_working(demand, l) ? 0 : volume;
    if (add == 0) continue;
    local_[l] = load(l) + add;
  }
  if (LedgerObserver* obs = ledger_->observer_) {
    obs->on_commit(demand, volume, scenario_, lightpaths, route_links);
  }
}

std::vector<int64_t> LevelTwoView::snapshot(int num_lightpaths) const {
  std::vector<int64_t> out(num_lightpaths);
  for (int l = 0; l < num_lightpaths; ++l) out[l] = load(l);
  return out;
}

}  // namespace stg2
