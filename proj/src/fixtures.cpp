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

#include "tiermatch/fixtures.hpp"

#include <map>

#include "tiermatch/bayes.hpp"
#include "tiermatch/scenario.hpp"

namespace tiermatch {
namespace {

struct Fixture {
  bool bayesian;
  std::string json;
};

const std::vector<std::pair<std::string, Fixture>>& registry() {
  static const std::vector<std::pair<std::string, Fixture>> kFixtures = {
      {"exp1", {false, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","3","2"], "b":["1","2","3"], "c":["3","1","2"]},
  "tiers": {"a":1,"b":2,"c":2},
  "preferences": {
    "1":{"acceptable":["c","b","a"],"unacceptable":[]},
    "2":{"acceptable":["b","c","a"],"unacceptable":[]},
    "3":{"acceptable":["b","a","c"],"unacceptable":[]}},
  "reports": {"Q": {
    "1":{"acceptable":["c","b"],"unacceptable":["a"]},
    "2":{"acceptable":["b","c","a"],"unacceptable":[]},
    "3":{"acceptable":["b","c"],"unacceptable":["a"]}}}
})"}},
      {"exp2", {false, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["3","2","1"], "b":["2","1","3"], "c":["1","2","3"]},
  "tiers": {"a":1,"b":2,"c":3},
  "preferences": {
    "1":{"acceptable":["c","b","a"],"unacceptable":[]},
    "2":{"acceptable":["b","c","a"],"unacceptable":[]},
    "3":{"acceptable":["b","a","c"],"unacceptable":[]}},
  "reports": {"Q3": {
    "1":{"acceptable":["c","b","a"],"unacceptable":[]},
    "2":{"acceptable":["b","c","a"],"unacceptable":[]},
    "3":{"acceptable":["b","c"],"unacceptable":["a"]}}}
})"}},
      {"exp3", {false, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","2","3"], "b":["2","3","1"], "c":["3","1","2"]},
  "tiers": {"a":1,"b":2,"c":3},
  "preferences": {
    "1":{"acceptable":["c","a","b"],"unacceptable":[]},
    "2":{"acceptable":["c","b"],"unacceptable":["a"]},
    "3":{"acceptable":["b","c"],"unacceptable":["a"]}}
})"}},
      {"expB1", {false, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["3","1","2"], "b":["1","2","3"], "c":["3","2","1"]},
  "tiers": {"a":1,"b":2,"c":2},
  "preferences": {
    "1":{"acceptable":["a","b","c"],"unacceptable":[]},
    "2":{"acceptable":["b","a","c"],"unacceptable":[]},
    "3":{"acceptable":["b","c","a"],"unacceptable":[]}}
})"}},
      // The guarantee claim quantifies over every preference profile; the
      // stored profile is only a placeholder for commands that need one.
      {"expB2", {false, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["2","1","3"], "b":["1","2","3"], "c":["3","2","1"]},
  "tiers": {"a":1,"b":2,"c":2},
  "preferences": {
    "1":{"acceptable":["a","b","c"],"unacceptable":[]},
    "2":{"acceptable":["a","b","c"],"unacceptable":[]},
    "3":{"acceptable":["a","b","c"],"unacceptable":[]}}
})"}},
      {"exp-prioun", {true, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","2","3"], "b":["1","2","3"], "c":["1","2","3"]},
  "tiers": {"a":1,"b":2,"c":2},
  "utilities": {
    "1": {"a":"2","b":"3","c":"1","self":"0"},
    "2": {"a":"2","b":"3","c":"1","self":"0"},
    "3": {"a":"2","b":"3","c":"1","self":"0"}},
  "states": [
    {"prob":"1/5",
     "priorities": {"a":["1","2","3"], "b":["1","2","3"], "c":["1","2","3"]}},
    {"prob":"4/5",
     "priorities": {"a":["2","3","1"], "b":["2","3","1"], "c":["2","3","1"]}}],
  "reports": {"Q": {
    "1":{"acceptable":["b","c"],"unacceptable":["a"]},
    "2":{"acceptable":["b","c"],"unacceptable":["a"]},
    "3":{"acceptable":["b","a","c"],"unacceptable":[]}}}
})"}},
      {"expB3-prefun", {true, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","2","3"], "b":["1","2","3"], "c":["2","1","3"]},
  "tiers": {"a":1,"b":2,"c":2},
  "utilities": {
    "2": {"a":"2","b":"3","c":"1","self":"0"},
    "3": {"a":"1","b":"3","c":"2","self":"0"}},
  "private_types": {"student":"1", "types": [
    {"prob":"1/5", "utilities": {"a":"1","b":"3","c":"2","self":"0"}},
    {"prob":"4/5", "utilities": {"a":"1","b":"2","c":"3","self":"0"}}]}
})"}},
      {"expB4-prioun2", {true, R"({
  "students": ["1","2","3"],
  "schools": ["a","b","c"],
  "quotas": {"a":1,"b":1,"c":1},
  "priorities": {"a":["1","2","3"], "b":["1","2","3"], "c":["1","2","3"]},
  "tiers": {"a":2,"b":2,"c":1},
  "utilities": {
    "1": {"a":"3","b":"2","c":"1","self":"0"},
    "2": {"a":"3","b":"1","c":"2","self":"0"},
    "3": {"a":"2","b":"3","c":"1","self":"0"}},
  "states": [
    {"prob":"1/5", "priorities": {"a":["1","2","3"]}},
    {"prob":"4/5", "priorities": {"a":["2","1","3"]}}],
  "reports": {"Q": {
    "1":{"acceptable":["a","b"],"unacceptable":["c"]},
    "2":{"acceptable":["a","b"],"unacceptable":["c"]},
    "3":{"acceptable":["b","a","c"],"unacceptable":[]}}}
})"}},
  };
  return kFixtures;
}

const Fixture& find_fixture(const std::string& name) {
  for (const auto& [key, fixture] : registry()) {
    if (key == name) return fixture;
  }
  throw Error(ErrorKind::kInput, "unknown fixture '" + name + "'");
}

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& entry : registry()) out.push_back(entry.first);
  return out;
}

bool is_fixture(const std::string& name) {
  for (const auto& entry : registry()) {
    if (entry.first == name) return true;
  }
  return false;
}

bool is_bayesian_fixture(const std::string& name) {
  return find_fixture(name).bayesian;
}

const std::string& fixture_json(const std::string& name) {
  return find_fixture(name).json;
}

Problem load_fixture(const std::string& name) {
  const Fixture& f = find_fixture(name);
  if (f.bayesian) return load_bayesian_problem(f.json).base;
  return load_problem(f.json);
}

}  // namespace tiermatch
