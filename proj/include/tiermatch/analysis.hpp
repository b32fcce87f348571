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

// Stability diagnostics, the brute-force stable set, priority cycles and
// responsive comparisons of the sets of students a school receives.

#ifndef TIERMATCH_ANALYSIS_HPP_
#define TIERMATCH_ANALYSIS_HPP_

#include <span>
#include <string>
#include <vector>

#include "tiermatch/types.hpp"

namespace tiermatch {

enum class BlockKind { kJustifiedEnvy, kWasteful };

struct BlockingPair {
  StudentIndex student;
  SchoolIndex school;
  BlockKind kind;

  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

struct StabilityReport {
  std::vector<BlockingPair> blocking_pairs;
  // Students matched to a school they rank below self.
  std::vector<StudentIndex> ir_violations;

  bool stable() const {
    return blocking_pairs.empty() && ir_violations.empty();
  }
  bool has_pair(StudentIndex i, SchoolIndex s) const;
};

// A pair (i, s) is listed once; justified envy takes precedence over
// wastefulness when both apply. Throws Error(kInput) on a malformed matching.
StabilityReport find_blocking_pairs(const PriorityStructure& ps,
                                    const Matching& matching,
                                    std::span<const Preference> evaluation);

bool is_stable(const PriorityStructure& ps, const Matching& matching,
               std::span<const Preference> evaluation);

// Individually rational, and every blocking pair (i, s) has i matched in a
// tier strictly earlier than s.
bool is_stable_wrt_tiers(const PriorityStructure& ps,
                         const TierStructure& tiers, const Matching& matching,
                         std::span<const Preference> evaluation);

inline constexpr int kDefaultStableSetCells = 25;

// Every quota-feasible assignment checked for stability; sorted. Guarded by
// |I|*|S| <= max_cells (Error(kGuard)).
std::vector<Matching> stable_set(const PriorityStructure& ps,
                                 std::span<const Preference> preferences,
                                 int max_cells = kDefaultStableSetCells);

Matching sosm(const PriorityStructure& ps,
              std::span<const Preference> preferences);

struct Cycle {
  SchoolIndex school_a;
  SchoolIndex school_b;
  StudentIndex i, j, k;
  std::vector<StudentIndex> scarcity_a;  // I_a, by priority at school_a
  std::vector<StudentIndex> scarcity_b;  // I_b, by priority at school_b

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

// One witness per (ordered school pair, student triple) that forms a cycle
// among `subset`.
std::vector<Cycle> find_cycles(const PriorityStructure& ps,
                               std::span<const SchoolIndex> subset);

// Cycles inside single tiers, tier by tier.
std::vector<Cycle> find_within_tier_cycles(const PriorityStructure& ps,
                                           const TierStructure& tiers);

bool is_within_tier_acyclic(const PriorityStructure& ps,
                            const TierStructure& tiers);

enum class Verdict { kBetter, kWorse, kEqual, kIncomparable };

std::string verdict_name(Verdict v);

// Compares set `a` against set `b` for a school with the given quota and
// priority: both padded with empty seats to the quota, sorted best first and
// compared seat by seat. kBetter means `a` is weakly better everywhere and
// strictly somewhere. Throws Error(kPrecondition) if a set exceeds the quota.
Verdict responsive_dominates(std::span<const StudentIndex> a,
                             std::span<const StudentIndex> b, int quota,
                             const PriorityOrder& priority);

// True iff `fine` refines `coarse`: coarse_a > coarse_b implies
// fine_a > fine_b for every pair of schools.
bool is_refinement(const TierStructure& fine, const TierStructure& coarse);

}  // namespace tiermatch

#endif  // TIERMATCH_ANALYSIS_HPP_
