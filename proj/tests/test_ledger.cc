#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "stg2/ledger.h"
#include "support/oracles.h"

using namespace stg2;
using namespace stg2::testing;

TEST_CASE("phases advance one step at a time") {
  Ledger ledger(4, 2, 100);
  CHECK(ledger.phase() == Phase::kWorking);
  CHECK_THROWS_AS(ledger.advance(Phase::kLevel2), LedgerContractError);
  CHECK_THROWS_AS(ledger.check_level1(0, 10, 0, 1), LedgerContractError);
  ledger.advance(Phase::kLevel1);
  CHECK_THROWS_AS(ledger.check_working(0, 10, 0), LedgerContractError);
  CHECK_THROWS_AS(ledger.advance(Phase::kLevel1), LedgerContractError);
  CHECK_THROWS_AS(LevelTwoView(ledger, Scenario::Level2(0, 1)),
                  LedgerContractError);
  ledger.advance(Phase::kLevel2);
  CHECK_THROWS_AS(ledger.advance(Phase::kWorking), LedgerContractError);
}

TEST_CASE("working loads and usage bits") {
  Ledger ledger(4, 3, 100);
  std::vector<int> lps{0, 2};
  std::vector<int> links{1, 3};
  CHECK(ledger.check_working(0, 100, 0));
  ledger.commit_working(0, 60, lps, links);
  CHECK(ledger.working_load(0) == 60);
  CHECK(ledger.working_load(1) == 0);
  CHECK(ledger.uses_working(0, 2));
  CHECK_FALSE(ledger.uses_working(1, 2));
  CHECK(ledger.check_working(1, 40, 0));
  CHECK_FALSE(ledger.check_working(1, 41, 0));
  CHECK_THROWS_AS(ledger.commit_working(0, 10, lps, links),
                  LedgerContractError);
  CHECK_THROWS_AS(ledger.commit_working(1, 41, lps, links),
                  LedgerContractError);
}

TEST_CASE("level-1 commits respect reservation and preconditions") {
  Ledger ledger(5, 2, 100);
  std::vector<int> w_lps{0};
  std::vector<int> w_links{0, 1};
  ledger.commit_working(0, 60, w_lps, w_links);
  ledger.commit_working(1, 30, std::vector<int>{1}, std::vector<int>{2});
  ledger.advance(Phase::kLevel1);
  // Demand 0 already holds 60 on lightpath 0, so reusing it adds nothing.
  CHECK(ledger.check_level1(0, 60, 0, 0));
  CHECK(ledger.check_level1(1, 40, 0, 2));
  CHECK_FALSE(ledger.check_level1(1, 41, 0, 2));
  std::vector<int> backup{0, 1};
  std::vector<int> b_links{2, 3};
  CHECK_THROWS_AS(ledger.commit_level1(0, 60, 4, backup, b_links),
                  LedgerContractError);
  CHECK_THROWS_AS(ledger.commit_level1(0, 60, 1, backup,
                                       std::vector<int>{1, 2}),
                  LedgerContractError);
  ledger.commit_level1(0, 60, 0, backup, b_links);
  CHECK(ledger.level1_increment(0, 0) == 0);
  CHECK(ledger.level1_increment(1, 0) == 60);
  CHECK(ledger.level1_load(1, 0) == 90);
  CHECK(ledger.over_reservation(1, Scenario::Level2(0, 2)) == 60);
  CHECK(ledger.over_reservation(1, Scenario::Level2(0, 4)) == 0);
  CHECK(ledger.level2_base(1, Scenario::Level2(0, 2)) == 30);
  CHECK(ledger.level2_base(1, Scenario::Level2(0, 4)) == 90);
  CHECK(ledger.sparse_entries() == 3);
}

TEST_CASE("level-2 views keep their commits local") {
  Ledger ledger(3, 2, 100);
  ledger.commit_working(0, 50, std::vector<int>{0}, std::vector<int>{0});
  ledger.advance(Phase::kLevel1);
  ledger.advance(Phase::kLevel2);
  {
    LevelTwoView view(ledger, Scenario::Level2(0, 1));
    CHECK(view.load(0) == 50);
    CHECK_THROWS_AS(LevelTwoView(ledger, Scenario::Level2(0, 1)),
                    LedgerContractError);
    CHECK(view.check(1, 50, 0));
    view.commit(1, 50, std::vector<int>{0, 1});
    CHECK(view.load(0) == 100);
    CHECK(view.load(1) == 50);
    CHECK_FALSE(view.check(1, 1, 0));
    CHECK(view.check(0, 90, 0));  // demand 0 is already counted on 0
    CHECK_THROWS_AS(view.commit(1, 60, std::vector<int>{1}),
                    LedgerContractError);
    CHECK(view.snapshot(3) == std::vector<int64_t>{100, 50, 0});
    CHECK(view.local_entries() == 2);
  }
  CHECK(ledger.level2_base(0, Scenario::Level2(0, 1)) == 50);
  LevelTwoView again(ledger, Scenario::Level2(0, 1));
  CHECK(again.load(0) == 50);
  again.close();
  CHECK_THROWS_AS(again.commit(1, 1, std::vector<int>{0}),
                  LedgerContractError);

  LevelTwoView snap(ledger, Scenario::Level2(1, 0), {70, 20});
  CHECK(snap.load(0) == 70);
  CHECK(snap.load(2) == 0);
  CHECK_THROWS_AS(LevelTwoView(ledger, Scenario::Level1(1)),
                  LedgerContractError);
}

TEST_CASE("incremental ledger equals direct updates on random commits") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const int K = 2 + static_cast<int>(rng() % 8);
    const int L = 2 + static_cast<int>(rng() % 10);
    const int64_t B = 1000;
    Ledger ledger(n, K, B);
    DirectLedger oracle(n, K);
    ledger.set_observer(&oracle);

    auto random_set = [&](int universe, int max_size) {
      std::set<int> s;
      int size = 1 + static_cast<int>(rng() % max_size);
      for (int i = 0; i < size; ++i) s.insert(static_cast<int>(rng() % universe));
      return std::vector<int>(s.begin(), s.end());
    };
    std::vector<std::vector<int>> work_links(K);
    for (int k = 0; k < K; ++k) {
      std::vector<int> lps = random_set(L, 3);
      work_links[k] = random_set(n, 3);
      for (int l : lps) ledger.check_working(k, 10, l);
      ledger.commit_working(k, 1 + static_cast<int64_t>(rng() % 40), lps,
                            work_links[k]);
    }
    ledger.advance(Phase::kLevel1);
    for (int k = 0; k < K; ++k) {
      for (int e1 : work_links[k]) {
        std::vector<int> links;
        for (int e : random_set(n, 3)) {
          if (e != e1) links.push_back(e);
        }
        std::vector<int> lps = random_set(L, 3);
        for (int l : lps) ledger.check_level1(k, 5, l, e1);
        ledger.commit_level1(k, 1 + static_cast<int64_t>(rng() % 40), e1, lps,
                             links);
      }
    }
    ledger.advance(Phase::kLevel2);
    for (int e1 = 0; e1 < n; ++e1) {
      for (int e2 = 0; e2 < n; ++e2) {
        if (e1 == e2) continue;
        Scenario s = Scenario::Level2(e1, e2);
        LevelTwoView view(ledger, s);
        for (int l = 0; l < L; ++l) {
          CHECK(view.load(l) == oracle.load(l, s));
          view.check(0, 1, l);
        }
        for (int k = 0; k < K; ++k) {
          if (rng() % 3) continue;
          view.commit(k, 1 + static_cast<int64_t>(rng() % 20),
                      random_set(L, 2));
          for (int l = 0; l < L; ++l) view.check(k, 1, l);
        }
      }
    }
    for (int e1 = 0; e1 < n; ++e1) {
      for (int l = 0; l < L; ++l) {
        CHECK(ledger.level1_load(l, e1) ==
              oracle.load(l, Scenario::Level1(e1)));
      }
    }
    CHECK(oracle.mismatches == 0);
    CHECK(oracle.phase_violations == 0);
    CHECK(oracle.queries > 0);
  }
}
