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

#include <string>

#include "tiermatch/fixtures.hpp"
#include "tiermatch/scenario.hpp"
#include "tiermatch/types.hpp"

using namespace tiermatch;

namespace {

const char* kExp1 = R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","3","2"], "b":["1","2","3"], "c":["3","1","2"]},
  "tiers": {"a":1,"b":2,"c":2},
  "preferences": {
    "1":{"acceptable":["c","b","a"],"unacceptable":[]},
    "2":{"acceptable":["b","c","a"],"unacceptable":[]},
    "3":{"acceptable":["b","a","c"],"unacceptable":[]}}
})";

template <class Fn>
std::string error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string text, const std::string& from,
                    const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

Problem blank3() {
  Problem p;
  p.schools = {"a", "b", "c"};
  return p;
}

}  // namespace

TEST_CASE("validate accepts the first example with two tiers") {
  const Problem p = load_problem(kExp1);
  CHECK(p.tiers.count() == 2);
  CHECK(p.tiers.tier_of(0) == 1);
  CHECK(p.tiers.tier_of(1) == 2);
  CHECK(p.tiers.tier_of(2) == 2);
  CHECK(p.num_students() == 3);
  CHECK(format_preference(p, p.preferences[0]) == "(c,b,a |)");
}

TEST_CASE("validate reports a tier gap") {
  const std::string bad =
      replace(kExp1, R"("tiers": {"a":1,"b":2,"c":2})",
              R"("tiers": {"a":1,"b":3,"c":3})");
  const std::string msg = error_of([&] { load_problem(bad); });
  CHECK(msg.find("tier 2 empty") != std::string::npos);
}

TEST_CASE("validate reports an incomplete priority") {
  const std::string bad =
      replace(kExp1, R"("a":["1","3","2"])", R"("a":["1","2"])");
  const std::string msg = error_of([&] { load_problem(bad); });
  CHECK(msg.find("priority not a permutation") != std::string::npos);
}

TEST_CASE("validate lists every violation at once") {
  std::string bad = replace(kExp1, R"("quotas": {"a":1,"b":1,"c":1})",
                            R"("quotas": {"a":-1,"b":1})");
  bad = replace(bad, R"("students": ["1","2","3"])",
                R"("students": ["1","2","2"])");
  try {
    load_problem(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInput);
    CHECK(e.issues().size() >= 3);
    const std::string msg = e.what();
    CHECK(msg.find("duplicate") != std::string::npos);
    CHECK(msg.find("negative quota") != std::string::npos);
  }
}

TEST_CASE("malformed JSON is an input error") {
  CHECK(error_of([] { load_problem("{"); }).find("JSON") != std::string::npos);
}

TEST_CASE("scenario round trip is the identity") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const Problem p = load_fixture(name);
    const Problem q = load_problem(save_problem(p));
    CHECK(q.students == p.students);
    CHECK(q.schools == p.schools);
    CHECK(q.structure.quotas == p.structure.quotas);
    CHECK(q.structure.priorities == p.structure.priorities);
    CHECK(q.tiers == p.tiers);
    CHECK(q.preferences == p.preferences);
    CHECK(q.reports == p.reports);
    CHECK(save_problem(q) == save_problem(p));
  }
}

TEST_CASE("restrict_preference keeps relative order") {
  const Problem p = load_problem(kExp1);
  const std::vector<SchoolIndex> bc{1, 2};
  CHECK(format_preference(p, restrict_preference(p.preferences[0], bc, 3)) ==
        "(c,b |)");
  CHECK(format_preference(p, restrict_preference(p.preferences[0], {}, 3)) ==
        "( |)");
  const Preference q3 = make_preference({1, 2}, p.schools);
  const std::vector<SchoolIndex> a{0};
  CHECK(format_preference(p, restrict_preference(q3, a, 3)) == "( | a)");
  const std::vector<SchoolIndex> all{0, 1, 2};
  for (const auto& pref : p.preferences) {
    CHECK(restrict_preference(pref, all, 3) == pref);
  }
  const std::vector<SchoolIndex> bad{7};
  CHECK_THROWS_AS(restrict_preference(q3, bad, 3), Error);
}

TEST_CASE("canonicalize sorts the unacceptable tail") {
  const Problem p = blank3();
  CHECK(format_preference(p, canonicalize(Preference{{2, 1}, {0}}, p.schools)) ==
        "(c,b | a)");
  CHECK(format_preference(p, canonicalize(Preference{{1}, {2, 0}}, p.schools)) ==
        "(b | a,c)");
  CHECK(format_preference(p, canonicalize(Preference{{}, {1, 0, 2}}, p.schools)) ==
        "( | a,b,c)");
  const Preference once = canonicalize(Preference{{1}, {2, 0}}, p.schools);
  CHECK(canonicalize(once, p.schools) == once);
}

TEST_CASE("canonical tail follows id strings, not positions") {
  Problem p;
  p.schools = {"z", "m", "a"};
  CHECK(format_preference(p, canonicalize(Preference{{}, {0, 1, 2}}, p.schools)) ==
        "( | a,m,z)");
}

TEST_CASE("preference ranks and acceptability") {
  const Preference p{{2, 1}, {0}};
  CHECK(p.rank(2) == 0);
  CHECK(p.rank(1) == 1);
  CHECK(p.rank(kSelf) == 2);
  CHECK(p.rank(0) == 3);
  CHECK(p.prefers(kSelf, 0));
  CHECK(p.is_acceptable(1));
  CHECK_FALSE(p.is_acceptable(0));
  const std::vector<int> table = p.rank_table(3);
  CHECK(table == std::vector<int>{3, 1, 0, 2});
}

TEST_CASE("preferences with omitted tails get the canonical tail") {
  const std::string text =
      replace(kExp1, R"("3":{"acceptable":["b","a","c"],"unacceptable":[]})",
              R"("3":{"acceptable":["c"]})");
  const Problem p = load_problem(text);
  CHECK(format_preference(p, p.preferences[2]) == "(c | a,b)");
}

TEST_CASE("preferences must rank every school exactly once") {
  const std::string text =
      replace(kExp1, R"("3":{"acceptable":["b","a","c"],"unacceptable":[]})",
              R"("3":{"acceptable":["b","b"],"unacceptable":["a","c"]})");
  CHECK(error_of([&] { load_problem(text); }).find("twice") !=
        std::string::npos);
}

TEST_CASE("zero quotas are legal") {
  const std::string text = replace(kExp1, R"("quotas": {"a":1,"b":1,"c":1})",
                                   R"("quotas": {"a":0,"b":0,"c":0})");
  CHECK(load_problem(text).structure.quotas == std::vector<int>{0, 0, 0});
}

TEST_CASE("matchings parse, serialize and respect quotas") {
  const Problem p = load_problem(kExp1);
  const Matching m =
      parse_matching(p, R"({"assignment": {"1":"c","2":"b","3":null}})");
  CHECK(format_matching(p, m) == "((1,c),(2,b))");
  CHECK(parse_matching(p, serialize_matching(p, m)) == m);
  CHECK_THROWS_AS(
      parse_matching(p, R"({"assignment": {"1":"c","2":"c","3":null}})"),
      Error);
  CHECK_THROWS_AS(check_matching(p, Matching{{2, 2, kSelf}}), Error);
  CHECK_THROWS_AS(
      parse_matching(p, R"({"assignment": {"1":"x","2":"c","3":null}})"),
      Error);
}

TEST_CASE("profiles parse bare or wrapped") {
  const Problem p = load_problem(kExp1);
  const char* bare = R"({"1":{"acceptable":["c","b"]},"2":{"acceptable":[]},
                         "3":{"acceptable":["a"]}})";
  const Profile q = parse_profile(p, bare);
  CHECK(format_preference(p, q[0]) == "(c,b | a)");
  CHECK(format_preference(p, q[1]) == "( | a,b,c)");
  const std::string wrapped = std::string(R"({"preferences":)") + bare + "}";
  CHECK(parse_profile(p, wrapped) == q);
}

TEST_CASE("fixture registry") {
  const auto names = fixture_names();
  CHECK(names.size() == 8);
  for (const char* n : {"exp1", "exp2", "exp3", "expB1", "expB2", "exp-prioun",
                        "expB3-prefun", "expB4-prioun2"}) {
    CHECK(is_fixture(n));
  }
  CHECK(is_bayesian_fixture("exp-prioun"));
  CHECK_FALSE(is_bayesian_fixture("exp1"));
  CHECK_THROWS_AS(load_fixture("nope"), Error);
  const Problem p = load_fixture("exp1");
  CHECK(p.reports.contains("Q"));
}

TEST_CASE("tier structures reject bad labels") {
  CHECK_THROWS_AS(TierStructure(std::vector<int>{0, 1}), Error);
  CHECK_THROWS_AS(TierStructure(std::vector<int>{1, 3}), Error);
  const TierStructure t(std::vector<int>{2, 1, 2});
  CHECK(t.count() == 2);
  CHECK(t.schools_in(2) == std::vector<SchoolIndex>{0, 2});
}
