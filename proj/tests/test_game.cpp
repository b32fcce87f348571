// Copyright 2026 The tiermatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>

#include "tiermatch/analysis.hpp"
#include "tiermatch/fixtures.hpp"
#include "tiermatch/game.hpp"
#include "tiermatch/harness.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/scenario.hpp"

using namespace tiermatch;

namespace {

// Nash check by re-running the mechanism for every unilateral deviation.
bool nash_by_rerun(const Problem& p, const TierStructure& t, Mechanism mech,
                   const StrategySpace& space, const Profile& q) {
  const Matching base = run_mechanism(mech, p.structure, t, q);
  for (StudentIndex i = 0; i < p.num_students(); ++i) {
    Profile dev = q;
    for (const Preference& s : space.all()) {
      dev[i] = s;
      const Matching m = run_mechanism(mech, p.structure, t, dev);
      if (p.preferences[i].prefers(m[i], base[i])) return false;
    }
  }
  return true;
}

std::vector<Profile> all_profiles(const StrategySpace& space, int n) {
  std::vector<Profile> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Profile q;
    for (int k : idx) q.push_back(space[k]);
    out.push_back(q);
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == space.size() - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return out;
}

Problem random_problem(Sampler& rng, int n, int m) {
  Problem p;
  p.students = default_student_ids(n);
  p.schools = default_school_ids(m);
  p.structure.num_students = n;
  const StrategySpace space(p.schools);
  for (int s = 0; s < m; ++s) {
    p.structure.quotas.push_back(static_cast<int>(rng.below(3)));
    std::vector<StudentIndex> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    p.structure.priorities.emplace_back(order);
  }
  for (int i = 0; i < n; ++i) {
    p.preferences.push_back(space[rng.below(space.size())]);
  }
  const auto all = all_tier_structures(m);
  p.tiers = all[rng.below(all.size())];
  return p;
}

}  // namespace

TEST_CASE("strategy space sizes and order") {
  CHECK(StrategySpace(default_school_ids(3)).size() == 16);
  CHECK(StrategySpace(default_school_ids(1)).size() == 2);
  CHECK(StrategySpace(default_school_ids(0)).size() == 1);
  CHECK(StrategySpace(default_school_ids(4)).size() == 65);
  const StrategySpace s(default_school_ids(3));
  CHECK(s[0].acceptable == std::vector<SchoolIndex>{0, 1, 2});
  CHECK(s[6].acceptable == std::vector<SchoolIndex>{0, 1});
  CHECK(s[15].acceptable.empty());
  for (int k = 0; k < s.size(); ++k) CHECK(s.index_of(s[k]) == k);
  CHECK_THROWS_AS(StrategySpace(default_school_ids(6)), Error);
}

TEST_CASE("outcome table encodes profiles with student 0 most significant") {
  const Problem p = load_fixture("exp1");
  const StrategySpace space(p.schools);
  const OutcomeTable table(p.structure, p.tiers, Mechanism::kTda, space);
  CHECK(table.size() == 4096);
  CHECK(table.stride(0) == 256);
  CHECK(table.stride(2) == 1);
  const std::vector<int> strat{3, 7, 15};
  const int64_t x = table.encode(strat);
  CHECK(x == 3 * 256 + 7 * 16 + 15);
  CHECK(table.decode(x) == strat);
  for (int64_t y = 0; y < table.size(); y += 37) {
    const Profile q = table.profile(y);
    CHECK(table.matching(y) ==
          run_mechanism(Mechanism::kTda, p.structure, p.tiers, q));
  }
}

TEST_CASE("profile guard") {
  CHECK(checked_profile_count(16, 3, 1'000'000) == 4096);
  CHECK_THROWS_AS(checked_profile_count(16, 5, 1'000'000), Error);
  const Problem p = load_fixture("exp1");
  Limits small;
  small.profile_guard = 100;
  try {
    enumerate_nash_outcomes(p, p.tiers, Mechanism::kTda, small);
    FAIL("expected guard");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kGuard);
  }
}

TEST_CASE("Nash enumeration agrees with re-running the mechanism") {
  Sampler rng(31);
  const StrategySpace space(default_school_ids(3));
  const auto profiles = all_profiles(space, 3);
  std::vector<Problem> cases{load_fixture("exp1"), load_fixture("exp3")};
  for (int k = 0; k < 2; ++k) cases.push_back(random_problem(rng, 3, 3));
  for (const Problem& p : cases) {
    for (Mechanism mech : {Mechanism::kDa, Mechanism::kTda}) {
      const OutcomeTable table(p.structure, p.tiers, mech, space);
      const auto fast = nash_profile_indices(table, p.preferences);
      std::vector<int64_t> slow;
      for (size_t x = 0; x < profiles.size(); ++x) {
        if (nash_by_rerun(p, p.tiers, mech, space, profiles[x])) {
          slow.push_back(static_cast<int64_t>(x));
        }
      }
      CHECK(fast == slow);
      CHECK(nash_profile_indices(table, p.preferences, 3) == fast);
    }
  }
}

TEST_CASE("weak dominance agrees with a direct scan") {
  const Problem p = load_fixture("exp1");
  const StrategySpace space(p.schools);
  const OutcomeTable table(p.structure, p.tiers, Mechanism::kTda, space);
  const DominanceTable dom(table, p.preferences);
  const auto profiles = all_profiles(space, 2);
  for (StudentIndex i = 0; i < 3; ++i) {
    const Preference& truth = p.preferences[i];
    for (int s = 0; s < space.size(); ++s) {
      bool dominated = false;
      for (int t = 0; t < space.size() && !dominated; ++t) {
        if (t == s) continue;
        bool weak = true, strict = false;
        for (const Profile& others : profiles) {
          Profile qs{others[0], others[1]}, qt{others[0], others[1]};
          qs.insert(qs.begin() + i, space[s]);
          qt.insert(qt.begin() + i, space[t]);
          const SchoolIndex as =
              run_mechanism(Mechanism::kTda, p.structure, p.tiers, qs)[i];
          const SchoolIndex at =
              run_mechanism(Mechanism::kTda, p.structure, p.tiers, qt)[i];
          if (truth.prefers(as, at)) weak = false;
          if (truth.prefers(at, as)) strict = true;
        }
        dominated = weak && strict;
      }
      CHECK(dom.dominated(i, s) == dominated);
    }
  }
}

TEST_CASE("equilibria of the first example") {
  const Problem p = load_fixture("exp1");
  const EquilibriumReport r =
      enumerate_nash_outcomes(p, p.tiers, Mechanism::kTda);
  REQUIRE(r.outcomes.size() == 2);
  std::set<std::string> names;
  for (const auto& m : r.outcomes) names.insert(format_matching(p, m));
  CHECK(names.count("((1,c),(2,b),(3,a))") == 1);
  CHECK(names.count("((1,c),(2,a),(3,b))") == 1);
  CHECK(is_nash(p, p.tiers, Mechanism::kTda, p.reports.at("Q")));
  CHECK_FALSE(is_nash(p, p.tiers, Mechanism::kDa, p.reports.at("Q")));
  CHECK(std::is_sorted(r.outcomes.begin(), r.outcomes.end()));
  for (const Profile& q : r.equilibria) {
    CHECK(is_nash(p, p.tiers, Mechanism::kTda, q));
  }
}

TEST_CASE("undominated DA equilibria yield exactly the SOSM") {
  Sampler rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const Problem p = random_problem(rng, 3, 3);
    const EquilibriumReport r =
        enumerate_undominated_nash_outcomes(p, p.tiers, Mechanism::kDa);
    REQUIRE(r.outcomes.size() == 1);
    CHECK(r.outcomes[0] == sosm(p.structure, p.preferences));
  }
}

TEST_CASE("Nash status depends only on acceptable prefixes") {
  const Problem p = load_fixture("exp1");
  Profile q = p.reports.at("Q");
  for (auto& pref : q) std::reverse(pref.unacceptable.begin(), pref.unacceptable.end());
  CHECK(is_nash(p, p.tiers, Mechanism::kTda, q) ==
        is_nash(p, p.tiers, Mechanism::kTda, p.reports.at("Q")));
}

TEST_CASE("weak dominance of single strategies") {
  const Problem p = load_fixture("exp1");
  const auto dom = is_weakly_dominated(p, p.tiers, Mechanism::kDa, 0,
                                       make_preference({1}, p.schools));
  CHECK(dom.has_value());
  CHECK_FALSE(is_weakly_dominated(p, p.tiers, Mechanism::kDa, 0,
                                  p.preferences[0])
                  .has_value());
  CHECK_THROWS_AS(is_weakly_dominated(p, p.tiers, Mechanism::kDa, 5,
                                      p.preferences[0]),
                  Error);
}

TEST_CASE("reshuffle, alignment and within-tier consistency") {
  const std::vector<std::string> ids = default_school_ids(3);
  const TierStructure t({1, 2, 2});
  const Preference r = make_preference({2, 1, 0}, ids);
  const Preference shuffled = reshuffle(r, t, ids);
  CHECK(shuffled.acceptable == std::vector<SchoolIndex>{0, 2, 1});
  CHECK(is_aligned(shuffled, t));
  CHECK_FALSE(is_aligned(r, t));
  const Preference truth = make_preference({1, 2, 0}, ids);
  const Preference q = make_preference({2, 0, 1}, ids);
  CHECK(within_tier_consistent(q, truth, t).acceptable ==
        std::vector<SchoolIndex>{1, 0, 2});
  CHECK(within_tier_consistent(truth, truth, t) == truth);
}

TEST_CASE("manipulation witnesses") {
  const Problem p = load_fixture("exp1");
  const auto dev = is_manipulable_at(p, p.tiers, Mechanism::kTda);
  REQUIRE(dev.has_value());
  Profile q = p.preferences;
  q[dev->student] = dev->report;
  const Matching m = run_mechanism(Mechanism::kTda, p.structure, p.tiers, q);
  CHECK(m[dev->student] == dev->outcome);
  const Matching honest =
      run_mechanism(Mechanism::kTda, p.structure, p.tiers, p.preferences);
  CHECK(p.preferences[dev->student].prefers(dev->outcome, honest[dev->student]));
  CHECK_FALSE(is_manipulable_at(p, p.tiers, Mechanism::kDa).has_value());
}

TEST_CASE("aligned domain: TDA is strategy-proof") {
  Sampler rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    Problem p = random_problem(rng, 3, 3);
    for (auto& pref : p.preferences) pref = reshuffle(pref, p.tiers, p.schools);
    const AlignedCheck c = check_aligned_domain_strategyproofness(p, p.tiers);
    CHECK(c.all_aligned);
    CHECK(c.strategy_proof);
  }
  const Problem p = load_fixture("exp1");
  const AlignedCheck one =
      check_aligned_domain_strategyproofness(p, TierStructure({1, 1, 1}));
  CHECK(one.all_aligned);
  CHECK(one.strategy_proof);
}

TEST_CASE("unaligned preferences get a manipulation environment") {
  const Problem p = load_fixture("exp1");
  const AlignedCheck c = check_aligned_domain_strategyproofness(p, p.tiers);
  CHECK_FALSE(c.all_aligned);
  CHECK_FALSE(c.strategy_proof);
  REQUIRE(c.witness.has_value());
  REQUIRE(c.environment.has_value());
  const Problem& env = *c.environment;
  Profile q = env.preferences;
  q[c.witness->student] = c.witness->report;
  const Matching honest =
      run_mechanism(Mechanism::kTda, env.structure, p.tiers, env.preferences);
  const Matching gamed = run_mechanism(Mechanism::kTda, env.structure, p.tiers, q);
  CHECK(env.preferences[c.witness->student].prefers(gamed[c.witness->student],
                                                    honest[c.witness->student]));
}

TEST_CASE("cycle construction yields an unstable equilibrium") {
  const Problem p = load_fixture("exp1");
  const auto cycles = find_within_tier_cycles(p.structure, p.tiers);
  REQUIRE_FALSE(cycles.empty());
  const CycleCounterexample ce =
      construct_cycle_counterexample(p, p.tiers, cycles.front());
  Problem env = p.with_preferences(ce.truth);
  CHECK(is_nash(env, p.tiers, Mechanism::kTda, ce.equilibrium));
  CHECK(ce.outcome ==
        run_mechanism(Mechanism::kTda, p.structure, p.tiers, ce.equilibrium));
  CHECK_FALSE(is_stable(p.structure, ce.outcome, ce.truth));

  Cycle cross = cycles.front();
  cross.school_b = 0;
  CHECK_THROWS_AS(construct_cycle_counterexample(p, p.tiers, cross), Error);
}

TEST_CASE("welfare constructions") {
  const Problem p = load_fixture("exp1");
  const TierStructure t({1, 2, 2});
  const std::vector<SchoolIndex> same{2};
  const auto w1 = construct_welfare_counterexample(p, t, 1, same);
  CHECK(w1.verdict == Verdict::kWorse);
  CHECK(is_nash(w1.problem, t, Mechanism::kTda, w1.equilibrium));
  const std::vector<SchoolIndex> pair{1, 2};
  const auto w2 = construct_welfare_counterexample(p, t, 0, pair);
  CHECK(w2.verdict == Verdict::kWorse);
  CHECK(w2.sosm == sosm(w2.problem.structure, w2.problem.preferences));

  const std::vector<SchoolIndex> bad{0};
  CHECK_THROWS_AS(construct_welfare_counterexample(p, t, 1, bad), Error);

  Problem two;
  two.students = default_student_ids(2);
  two.schools = p.schools;
  two.structure.num_students = 2;
  two.structure.quotas = {1, 1, 1};
  two.structure.priorities.assign(3, PriorityOrder({0, 1}));
  two.tiers = t;
  two.preferences.assign(2, make_preference({0}, p.schools));
  try {
    construct_welfare_counterexample(two, t, 1, same);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kPrecondition);
  }
}
