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

// Built-in scenarios reproducing the worked examples.
//
//   exp1           three students, a in tier 1, b/c in tier 2; report "Q"
//   exp2           manipulability comparison, default tiers (1,2,3)
//   exp3           stability comparison, default tiers (1,2,3)
//   expB1          moving b to an earlier tier, default tiers (1,2,2)
//   expB2          guarantee for a despite a tier-2 cycle, tiers (1,2,2)
//   exp-prioun     priority lottery 1/5 vs 4/5 (Bayesian)
//   expB3-prefun   student 1 has two private types (Bayesian)
//   expB4-prioun2  lottery over school a's priority only (Bayesian)

#ifndef TIERMATCH_FIXTURES_HPP_
#define TIERMATCH_FIXTURES_HPP_

#include <string>
#include <vector>

#include "tiermatch/types.hpp"

namespace tiermatch {

std::vector<std::string> fixture_names();
bool is_fixture(const std::string& name);
bool is_bayesian_fixture(const std::string& name);

// Scenario JSON text of a fixture. Throws Error(kInput) on unknown names.
const std::string& fixture_json(const std::string& name);

// Complete-information problem of a fixture. For Bayesian fixtures this is
// the base scenario (first state's priorities, first type's preferences).
Problem load_fixture(const std::string& name);

}  // namespace tiermatch

#endif  // TIERMATCH_FIXTURES_HPP_
