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

// Student-proposing deferred acceptance and its tiered variant.

#ifndef TIERMATCH_MECHANISMS_HPP_
#define TIERMATCH_MECHANISMS_HPP_

#include <span>
#include <string>
#include <vector>

#include "tiermatch/types.hpp"

namespace tiermatch {

enum class Mechanism { kDa, kTda };

std::string mechanism_name(Mechanism m);
// Accepts "da" and "tda".
Mechanism parse_mechanism(const std::string& name);

// Runs DA over `participants` and the schools in `school_subset`; every
// report is read only through its acceptable prefix, filtered to the subset.
// Proposals go out in synchronous steps; schools hold their top-q proposers.
// Students outside `participants` are left at kSelf.
Matching deferred_acceptance(const PriorityStructure& ps,
                             std::span<const Preference> reports,
                             std::span<const StudentIndex> participants,
                             std::span<const SchoolIndex> school_subset);

// DA over all students and schools.
Matching deferred_acceptance(const PriorityStructure& ps,
                             std::span<const Preference> reports);

struct TdaRound {
  int tier = 0;
  std::vector<StudentIndex> participants;
  Matching matching;  // round-local DA outcome over `participants`
};

struct TdaTrace {
  std::vector<TdaRound> rounds;
  Matching final;
};

TdaTrace tiered_deferred_acceptance(const PriorityStructure& ps,
                                    const TierStructure& tiers,
                                    std::span<const Preference> reports);

// Final matching only; same as tiered_deferred_acceptance(...).final.
Matching run_mechanism(Mechanism mech, const PriorityStructure& ps,
                       const TierStructure& tiers,
                       std::span<const Preference> reports);

// One school per tier, following `order`.
TierStructure finest_tiers(int num_schools, std::span<const SchoolIndex> order);

}  // namespace tiermatch

#endif  // TIERMATCH_MECHANISMS_HPP_
