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
#include <set>
#include <string>

#include "tiermatch/bayes.hpp"
#include "tiermatch/fixtures.hpp"
#include "tiermatch/game.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/scenario.hpp"

using namespace tiermatch;

namespace {

std::string replace(std::string text, const std::string& from,
                    const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

PriorityStructure state_structure(const BayesianProblem& bp, int k) {
  PriorityStructure ps = bp.base.structure;
  ps.priorities = bp.states[k].priorities;
  return ps;
}

Rational utility(const BayesState& st, StudentIndex i, SchoolIndex s) {
  return s == kSelf ? st.utilities[i].back() : st.utilities[i][s];
}

// Expected utility of every student, computed from scratch.
std::vector<Rational> expected_utilities(const BayesianProblem& bp,
                                         Mechanism mech, const Profile& q) {
  std::vector<Rational> eu(bp.base.num_students(), Rational(0));
  for (size_t k = 0; k < bp.states.size(); ++k) {
    const BayesState& st = bp.states[k];
    const Matching m =
        run_mechanism(mech, state_structure(bp, static_cast<int>(k)),
                      bp.base.tiers, q);
    for (StudentIndex i = 0; i < bp.base.num_students(); ++i) {
      eu[i] += st.probability * utility(st, i, m[i]);
    }
  }
  return eu;
}

// Bayes-Nash profiles over common-knowledge-type games, by brute force.
std::vector<Profile> brute_force_bne(const BayesianProblem& bp,
                                     Mechanism mech) {
  const StrategySpace space(bp.base.schools);
  const int n = bp.base.num_students();
  const int k = space.size();
  std::vector<Profile> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Profile q;
    for (int s : idx) q.push_back(space[s]);
    const auto base = expected_utilities(bp, mech, q);
    bool ok = true;
    for (StudentIndex i = 0; i < n && ok; ++i) {
      Profile dev = q;
      for (int s = 0; s < k && ok; ++s) {
        dev[i] = space[s];
        ok = expected_utilities(bp, mech, dev)[i] <= base[i];
      }
    }
    if (ok) out.push_back(q);
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == k - 1) idx[pos--] = 0;
    if (pos < 0) break;
    ++idx[pos];
  }
  return out;
}

const char* kSingleState = R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","3","2"], "b":["1","2","3"], "c":["3","1","2"]},
  "tiers": {"a":1,"b":2,"c":2},
  "utilities": {
    "1": {"a":"1","b":"2","c":"3","self":"0"},
    "2": {"a":"1","b":"3","c":"2","self":"0"},
    "3": {"a":"2","b":"3","c":"1","self":"0"}},
  "states": [
    {"prob":"1",
     "priorities": {"a":["1","3","2"], "b":["1","2","3"], "c":["3","1","2"]}}]
})";

}  // namespace

TEST_CASE("rationals print as p/q and parse strictly") {
  CHECK(format_rational(Rational(13, 5)) == "13/5");
  CHECK(format_rational(Rational(2)) == "2/1");
  CHECK(format_rational(Rational(0)) == "0/1");
  CHECK(parse_rational("4/5") == Rational(4, 5));
  CHECK(parse_rational("6/10") == Rational(3, 5));
  CHECK(parse_rational("3") == Rational(3));
  for (const char* bad : {"", "1/0", "x", "1/2/3", "0.5", "1/ 2x"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), Error);
  }
}

TEST_CASE("Bayesian loader validates probabilities and utilities") {
  const std::string text = fixture_json("exp-prioun");
  CHECK(is_bayesian_json(text));
  CHECK_FALSE(is_bayesian_json(fixture_json("exp1")));
  const BayesianProblem bp = load_bayesian_problem(text);
  CHECK(bp.states.size() == 2);
  CHECK(bp.states[1].probability == Rational(4, 5));
  CHECK_FALSE(bp.typed_student.has_value());
  CHECK(format_preference(bp.base, bp.states[0].preferences[0]) == "(b,a,c |)");

  const std::string bad_sum =
      replace(text, R"({"prob":"4/5",)", R"({"prob":"3/5",)");
  try {
    load_bayesian_problem(bad_sum);
    FAIL("expected an input error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("sum to 4/5") != std::string::npos);
  }
  const std::string tie = replace(
      text, R"("1": {"a":"2","b":"3","c":"1","self":"0"})",
      R"("1": {"a":"2","b":"2","c":"1","self":"0"})");
  try {
    load_bayesian_problem(tie);
    FAIL("expected an input error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("pairwise distinct") != std::string::npos);
  }
  const std::string zero =
      replace(text, R"({"prob":"1/5",)", R"({"prob":"0",)");
  CHECK_THROWS_AS(load_bayesian_problem(zero), Error);
}

TEST_CASE("private types load as separate type slots") {
  const BayesianProblem bp = load_bayesian_problem(fixture_json("expB3-prefun"));
  REQUIRE(bp.typed_student.has_value());
  CHECK(*bp.typed_student == 0);
  CHECK(bp.states.size() == 2);
  const BayesProfile truth = truthful_profile(bp);
  CHECK(truth.type_reports.size() == 2);
  CHECK(format_preference(bp.base, truth.type_reports[0]) == "(b,c,a |)");
  CHECK(format_preference(bp.base, truth.type_reports[1]) == "(c,b,a |)");
  CHECK(state_reports(bp, truth, 1)[0] == truth.type_reports[1]);
}

TEST_CASE("expected utility of student 2 at the printed profile") {
  const BayesianProblem bp = load_bayesian_problem(fixture_json("exp-prioun"));
  BayesProfile q;
  q.reports = bp.base.reports.at("Q");
  CHECK(expected_utility(bp, Mechanism::kTda, q, 1) == Rational(13, 5));
  const auto direct = expected_utilities(bp, Mechanism::kTda, q.reports);
  for (StudentIndex i = 0; i < 3; ++i) {
    CHECK(expected_utility(bp, Mechanism::kTda, q, i) == direct[i]);
  }
}

TEST_CASE("expected utility is linear in the state probabilities") {
  BayesianProblem bp = load_bayesian_problem(fixture_json("exp-prioun"));
  BayesProfile q;
  q.reports = bp.base.reports.at("Q");
  const auto outcomes = bayes_outcomes(bp, Mechanism::kTda, q);
  for (const auto& [p0, p1] : {std::pair{Rational(1, 5), Rational(4, 5)},
                               std::pair{Rational(1, 2), Rational(1, 2)},
                               std::pair{Rational(9, 10), Rational(1, 10)}}) {
    bp.states[0].probability = p0;
    bp.states[1].probability = p1;
    for (StudentIndex i = 0; i < 3; ++i) {
      const Rational expect = p0 * utility(bp.states[0], i, outcomes[0][i]) +
                              p1 * utility(bp.states[1], i, outcomes[1][i]);
      CHECK(expected_utility(bp, Mechanism::kTda, q, i) == expect);
    }
  }
}

TEST_CASE("one state reduces to complete information") {
  const BayesianProblem bp = load_bayesian_problem(kSingleState);
  Problem p = bp.base;
  p.preferences = bp.states[0].preferences;
  for (Mechanism mech : {Mechanism::kDa, Mechanism::kTda}) {
    const BneReport bne = enumerate_bne_outcomes(bp, mech);
    const EquilibriumReport ne = enumerate_nash_outcomes(p, p.tiers, mech);
    REQUIRE(bne.equilibria.size() == ne.equilibria.size());
    for (size_t k = 0; k < ne.equilibria.size(); ++k) {
      CHECK(bne.equilibria[k].reports == ne.equilibria[k]);
    }
    std::set<Matching> a, b(ne.outcomes.begin(), ne.outcomes.end());
    for (const auto& t : bne.outcome_tuples) a.insert(t.at(0));
    CHECK(a == b);
  }
}

TEST_CASE("Bayes-Nash enumeration agrees with a brute-force scan") {
  for (const char* name : {"exp-prioun", "expB4-prioun2"}) {
    CAPTURE(name);
    const BayesianProblem bp = load_bayesian_problem(fixture_json(name));
    const BneReport r = enumerate_bne_outcomes(bp, Mechanism::kTda);
    const auto slow = brute_force_bne(bp, Mechanism::kTda);
    REQUIRE(r.equilibria.size() == slow.size());
    for (size_t k = 0; k < slow.size(); ++k) {
      CHECK(r.equilibria[k].reports == slow[k]);
      CHECK(is_bayes_nash(bp, Mechanism::kTda, r.equilibria[k]));
    }
    CHECK(r.outcome_tuples.size() == 1);
  }
}

TEST_CASE("each fixture has a unique TDA outcome tuple") {
  for (const char* name : {"exp-prioun", "expB3-prefun", "expB4-prioun2"}) {
    CAPTURE(name);
    const BayesianProblem bp = load_bayesian_problem(fixture_json(name));
    const BneReport r = enumerate_bne_outcomes(bp, Mechanism::kTda);
    CHECK(r.outcome_tuples.size() == 1);
    CHECK_FALSE(r.equilibria.empty());
    const BneReport da = enumerate_bne_outcomes(bp, Mechanism::kDa);
    CHECK(std::find(da.equilibria.begin(), da.equilibria.end(),
                    truthful_profile(bp)) != da.equilibria.end());
  }
}
