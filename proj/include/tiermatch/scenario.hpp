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

// Scenario files and the unvalidated form they decode into.

#ifndef TIERMATCH_SCENARIO_HPP_
#define TIERMATCH_SCENARIO_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiermatch/types.hpp"

namespace tiermatch {

struct RawPreference {
  std::vector<std::string> acceptable;
  // Absent means "every other school, in canonical order".
  std::optional<std::vector<std::string>> unacceptable;
};

using RawProfile = std::map<std::string, RawPreference>;

struct RawProblem {
  std::vector<std::string> students;
  std::vector<std::string> schools;
  std::map<std::string, long long> quotas;
  std::map<std::string, std::vector<std::string>> priorities;
  std::map<std::string, long long> tiers;
  RawProfile preferences;
  std::map<std::string, RawProfile> reports;
};

// Validates every invariant at once; throws Error(kInput) whose issues list
// each violation.
Problem validate_problem(const RawProblem& raw);

// Converts a raw profile against an already validated problem.
Profile validate_profile(const Problem& problem, const RawProfile& raw);

RawProblem to_raw(const Problem& problem);

// JSON scenario text <-> RawProblem. Parse errors raise Error(kInput).
RawProblem parse_scenario(std::string_view json_text);
std::string serialize_scenario(const RawProblem& raw);

Problem load_problem(std::string_view json_text);
std::string save_problem(const Problem& problem);

// {"1":{"acceptable":[...],"unacceptable":[...]},...}, optionally wrapped as
// {"preferences": {...}}.
Profile parse_profile(const Problem& problem, std::string_view json_text);

// {"assignment": {"1":"c","2":null}}
Matching parse_matching(const Problem& problem, std::string_view json_text);
std::string serialize_matching(const Problem& problem, const Matching& m);

// Throws Error(kInput) if a school is over quota.
void check_matching(const Problem& problem, const Matching& m);

}  // namespace tiermatch

#endif  // TIERMATCH_SCENARIO_HPP_
