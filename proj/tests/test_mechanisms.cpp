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

#include <numeric>

#include "tiermatch/analysis.hpp"
#include "tiermatch/fixtures.hpp"
#include "tiermatch/game.hpp"
#include "tiermatch/harness.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/scenario.hpp"

using namespace tiermatch;

namespace {

std::string run(const Problem& p, Mechanism m, const TierStructure& t,
                const Profile& r) {
  return format_matching(p, run_mechanism(m, p.structure, t, r));
}

// Random problem with `n` students and `m` schools.
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

TEST_CASE("DA on the first example") {
  const Problem p = load_fixture("exp1");
  CHECK(run(p, Mechanism::kDa, p.tiers, p.preferences) ==
        "((1,c),(2,b),(3,a))");
}

TEST_CASE("DA with one student and one school") {
  PriorityStructure ps;
  ps.num_students = 1;
  ps.quotas = {1};
  ps.priorities = {PriorityOrder({0})};
  const Profile r{Preference{{0}, {}}};
  CHECK(deferred_acceptance(ps, r).assignment == std::vector<SchoolIndex>{0});
  const Profile none{Preference{{}, {0}}};
  CHECK(deferred_acceptance(ps, none).assignment ==
        std::vector<SchoolIndex>{kSelf});
}

TEST_CASE("zero-quota schools reject everyone") {
  PriorityStructure ps;
  ps.num_students = 2;
  ps.quotas = {0, 1};
  ps.priorities = {PriorityOrder({0, 1}), PriorityOrder({1, 0})};
  const Profile r{Preference{{0, 1}, {}}, Preference{{0}, {1}}};
  CHECK(deferred_acceptance(ps, r).assignment ==
        std::vector<SchoolIndex>{1, kSelf});
}

TEST_CASE("TDA on the first example") {
  const Problem p = load_fixture("exp1");
  const TdaTrace trace =
      tiered_deferred_acceptance(p.structure, p.tiers, p.preferences);
  CHECK(format_matching(p, trace.final) == "((1,a),(2,b),(3,c))");
  REQUIRE(trace.rounds.size() == 2);
  CHECK(trace.rounds[0].tier == 1);
  CHECK(trace.rounds[0].participants == std::vector<StudentIndex>{0, 1, 2});
  CHECK(trace.rounds[1].participants == std::vector<StudentIndex>{1, 2});
  CHECK(run(p, Mechanism::kTda, p.tiers, p.reports.at("Q")) ==
        "((1,c),(2,a),(3,b))");
}

TEST_CASE("trace invariants: frozen students never reappear") {
  Sampler rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const Problem p = random_problem(rng, 4, 3);
    const TdaTrace trace =
        tiered_deferred_acceptance(p.structure, p.tiers, p.preferences);
    Matching assembled{std::vector<SchoolIndex>(4, kSelf)};
    std::vector<bool> frozen(4, false);
    for (const TdaRound& r : trace.rounds) {
      for (StudentIndex i : r.participants) {
        CHECK_FALSE(frozen[i]);
        if (r.matching[i] != kSelf) {
          CHECK(p.tiers.tier_of(r.matching[i]) == r.tier);
          assembled.assignment[i] = r.matching[i];
          frozen[i] = true;
        }
      }
    }
    CHECK(assembled == trace.final);
  }
}

TEST_CASE("one tier reduces TDA to DA") {
  Sampler rng(11);
  const TierStructure one({1, 1, 1});
  for (int trial = 0; trial < 500; ++trial) {
    const Problem p = random_problem(rng, 3, 3);
    CHECK(run_mechanism(Mechanism::kTda, p.structure, one, p.preferences) ==
          deferred_acceptance(p.structure, p.preferences));
  }
}

TEST_CASE("DA equals the student-optimal element of the brute-force stable set") {
  Sampler rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    const Problem p = random_problem(rng, 3, 3);
    const Matching da = deferred_acceptance(p.structure, p.preferences);
    const auto stable = stable_set(p.structure, p.preferences);
    REQUIRE_FALSE(stable.empty());
    CHECK(std::find(stable.begin(), stable.end(), da) != stable.end());
    for (const Matching& mu : stable) {
      for (int i = 0; i < 3; ++i) {
        CHECK(p.preferences[i].rank(da[i]) <= p.preferences[i].rank(mu[i]));
      }
    }
  }
}

TEST_CASE("DA output is stable for the reports on larger random inputs") {
  Sampler rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const Problem p = random_problem(rng, 6, 4);
    CHECK(is_stable(p.structure, deferred_acceptance(p.structure, p.preferences),
                    p.preferences));
  }
}

TEST_CASE("cross-tier permutation of a report keeps the TDA outcome") {
  Sampler rng(29);
  const StrategySpace space(default_school_ids(3));
  for (int trial = 0; trial < 300; ++trial) {
    const Problem p = random_problem(rng, 3, 3);
    Profile shuffled;
    for (const auto& pref : p.preferences) {
      shuffled.push_back(reshuffle(pref, p.tiers, p.schools));
    }
    CHECK(run_mechanism(Mechanism::kTda, p.structure, p.tiers, shuffled) ==
          run_mechanism(Mechanism::kTda, p.structure, p.tiers, p.preferences));
  }
}

TEST_CASE("finest tiers") {
  const std::vector<SchoolIndex> abc{0, 1, 2};
  const TierStructure t = finest_tiers(3, abc);
  CHECK(t.labels() == std::vector<int>{1, 2, 3});
  CHECK(t.count() == 3);
  const std::vector<SchoolIndex> single{0};
  CHECK(finest_tiers(1, single).labels() == std::vector<int>{1});
  const std::vector<SchoolIndex> cab{2, 0, 1};
  CHECK(finest_tiers(3, cab).labels() == std::vector<int>{2, 3, 1});
  const std::vector<SchoolIndex> dup{0, 0, 1};
  CHECK_THROWS_AS(finest_tiers(3, dup), Error);
  const Problem p = load_fixture("exp3");
  CHECK(run(p, Mechanism::kTda, t, p.preferences) == "((1,a),(2,b),(3,c))");
}

TEST_CASE("mechanism names") {
  CHECK(parse_mechanism("da") == Mechanism::kDa);
  CHECK(parse_mechanism("tda") == Mechanism::kTda);
  CHECK(mechanism_name(Mechanism::kTda) == "tda");
  CHECK_THROWS_AS(parse_mechanism("boston"), Error);
}
