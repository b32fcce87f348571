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


// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit status
// when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "properties.hpp"
#include "tiermatch/analysis.hpp"
#include "tiermatch/fixtures.hpp"
#include "tiermatch/game.hpp"
#include "tiermatch/harness.hpp"
#include "tiermatch/mechanisms.hpp"

using namespace tiermatch;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

std::set<std::string> names_of(const Problem& p,
                               const std::vector<Matching>& ms) {
  std::set<std::string> out;
  for (const Matching& m : ms) out.insert(format_matching(p, m));
  return out;
}

void expect_group(Outcome& o, const std::vector<NamedCheck>& checks,
                  const std::string& group) {
  int seen = 0;
  for (const NamedCheck& c : checks) {
    if (c.group != group) continue;
    ++seen;
    o.expect(c.passed, group + "/" + c.name + " (expected " + c.expected +
                           ", got " + c.actual + ")");
  }
  o.expect(seen > 0, "no checks ran for " + group);
}

Outcome criterion1() {
  Outcome o;
  const Problem p = load_fixture("exp1");
  const auto run = [&](Mechanism m, const TierStructure& t, const Profile& r) {
    return format_matching(p, run_mechanism(m, p.structure, t, r));
  };
  const Profile& q = p.reports.at("Q");
  o.expect(run(Mechanism::kDa, p.tiers, p.preferences) == "((1,c),(2,b),(3,a))",
           "DA(truthful)");
  o.expect(run(Mechanism::kTda, p.tiers, p.preferences) == "((1,a),(2,b),(3,c))",
           "TDA(t)(truthful)");
  const std::string q_outcome = run(Mechanism::kTda, p.tiers, q);
  o.expect(q_outcome == "((1,c),(2,a),(3,b))", "TDA(t)(Q)");
  const auto ne = enumerate_nash_outcomes(p, p.tiers, Mechanism::kTda);
  o.expect(names_of(p, ne.outcomes) ==
               std::set<std::string>{"((1,c),(2,b),(3,a))", q_outcome},
           "NE outcome set");
  const auto und_t =
      enumerate_undominated_nash_outcomes(p, p.tiers, Mechanism::kTda);
  o.expect(names_of(p, und_t.outcomes).count(q_outcome) == 1,
           "undominated filter keeps Q's outcome under t");
  const auto und_t2 = enumerate_undominated_nash_outcomes(
      p, TierStructure({2, 1, 1}), Mechanism::kTda);
  o.expect(names_of(p, und_t2.outcomes).count(q_outcome) == 0,
           "undominated filter removes Q's outcome under (2,1,1)");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto checks = replay_examples();
  expect_group(o, checks, "exp2");
  expect_group(o, checks, "exp3");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Problem p = load_fixture("expB1");
  const auto a = enumerate_nash_outcomes(p, TierStructure({1, 2, 2}),
                                         Mechanism::kTda);
  o.expect(names_of(p, a.outcomes) ==
               std::set<std::string>{"((1,a),(2,b),(3,c))"},
           "NE outcomes under (1,2,2)");
  const auto b = enumerate_nash_outcomes(p, TierStructure({1, 1, 2}),
                                         Mechanism::kTda);
  o.expect(names_of(p, b.outcomes) ==
               std::set<std::string>{"((1,a),(2,b),(3,c))",
                                     "((1,a),(2,c),(3,b))"},
           "NE outcomes under (1,1,2)");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const Problem p = load_fixture("expB2");
  const std::vector<SchoolIndex> a{0};
  for (const std::vector<int>& labels :
       {std::vector<int>{1, 2, 2}, std::vector<int>{2, 1, 1}}) {
    const TierStructure t(labels);
    const AuditResult r = guarantee_audit(p, t, a);
    std::string name = "(";
    for (size_t k = 0; k < labels.size(); ++k) {
      name += (k ? "," : "") + std::to_string(labels[k]);
    }
    name += ")";
    o.note(name + ": " + std::to_string(r.true_profiles) + " true profiles, " +
           std::to_string(r.equilibria_checked) + " equilibria, " +
           std::to_string(r.worse) + " worse, " +
           std::to_string(r.incomparable) + " incomparable");
    if (r.first) {
      o.note(name + " first violation: truth " +
             format_preference(p, r.first->truth[0]) + " " +
             format_preference(p, r.first->truth[1]) + " " +
             format_preference(p, r.first->truth[2]) + ", outcome " +
             format_matching(p, r.first->outcome) + ", SOSM " +
             format_matching(p, r.first->sosm));
    }
    o.expect(r.passed(), "school a weakly better than SOSM in every NE under " +
                             name);
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  TheoremOptions opts;
  opts.seed = 42;
  opts.trials = 200;
  const TheoremReport r = verify_theorems(opts);
  for (const CheckTally& t : r.tallies) {
    o.note(t.name + ": " + std::to_string(t.passed) + " passed, " +
           std::to_string(t.failed) + " failed, " + std::to_string(t.skipped) +
           " skipped");
    o.expect(t.failed == 0, t.name);
  }
  for (const Failure& f : r.failures) {
    o.note("trial " + std::to_string(f.trial) + " " + f.check + ": " +
           f.detail_json);
  }
  o.expect(r.ok() && !r.tallies.empty(), "theorem sweep");
  return o;
}

Outcome criterion6() {
  Outcome o;
  expect_group(o, replay_examples(), "welfare");
  Problem two = load_fixture("exp1");
  two.students.pop_back();
  two.structure.num_students = 2;
  two.structure.priorities.assign(3, PriorityOrder({0, 1}));
  two.preferences.pop_back();
  two.reports.clear();
  const std::vector<SchoolIndex> same{2};
  bool rejected = false;
  try {
    construct_welfare_counterexample(two, two.tiers, 1, same);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::kPrecondition;
  }
  o.expect(rejected, "construction rejects |I| = 2");
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto checks = verify_bayes_fixtures();
  for (const char* g : {"exp-prioun", "expB3-prefun", "expB4-prioun2"}) {
    expect_group(o, checks, g);
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (const auto& suite : testing::property_suites()) {
    const testing::PropertyResult r = suite();
    o.note(r.name + ": " + std::to_string(r.cases) + " cases, " +
           std::to_string(r.failures) + " failures");
    if (!r.first_failure.empty()) o.note("  " + r.first_failure);
    o.expect(r.ok(), r.name);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 example-1 outcomes, equilibria and undominated filter", criterion1},
      {"2 examples 2 and 3 non-monotonicity", criterion2},
      {"3 expB1 equilibrium outcome sets under (1,2,2) and (1,1,2)", criterion3},
      {"4 expB2 guarantee traversal for school a", criterion4},
      {"5 theorem harness, 200 random 3x3 instances, seed 42", criterion5},
      {"6 welfare constructions", criterion6},
      {"7 Bayesian fixtures", criterion7},
      {"8 exhaustive 3x3 property suites", criterion8},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.passed = false;
      o.notes.push_back(std::string("error: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    std::printf("%s criterion %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", name,
                secs);
    for (const std::string& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
