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

// The preference-revelation game induced by DA or TDA: canonical strategies,
// memoized outcome tables, Nash equilibria, weak dominance, the reshuffle map
// and the explicit counterexample constructions.

#ifndef TIERMATCH_GAME_HPP_
#define TIERMATCH_GAME_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tiermatch/analysis.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/types.hpp"

namespace tiermatch {

inline constexpr int64_t kDefaultProfileGuard = 1'000'000;
inline constexpr int64_t kDefaultAuditWorkGuard = int64_t{1} << 27;
inline constexpr int kDefaultMaxStrategySchools = 5;

struct Limits {
  int64_t profile_guard = kDefaultProfileGuard;
  // Bound on (outcome table size)^2 for whole-domain audits.
  int64_t audit_work_guard = kDefaultAuditWorkGuard;
  int max_strategy_schools = kDefaultMaxStrategySchools;
  int stable_cells = kDefaultStableSetCells;
  int jobs = 1;
};

// Defaults with TIERMATCH_GUARD_PROFILES applied when set.
Limits limits_from_env();

// Canonical strategies: every ordered subset of the schools as acceptable
// prefix, canonical tail. Longer lists come first, equal lengths
// lexicographically by school index; the empty list is last.
class StrategySpace {
 public:
  StrategySpace(const std::vector<std::string>& school_ids,
                int max_schools = kDefaultMaxStrategySchools);

  int size() const { return static_cast<int>(strategies_.size()); }
  const Preference& operator[](int k) const { return strategies_[k]; }
  const std::vector<Preference>& all() const { return strategies_; }
  // Index of the strategy with the same acceptable prefix.
  int index_of(const Preference& p) const;

 private:
  std::vector<Preference> strategies_;
  std::map<std::vector<SchoolIndex>, int> index_;
};

std::vector<Preference> strategy_space(
    const std::vector<std::string>& school_ids,
    int max_schools = kDefaultMaxStrategySchools);

// Mechanism outcomes for every canonical strategy profile. Profiles are
// numbered in mixed radix with student 0 as the most significant digit.
class OutcomeTable {
 public:
  OutcomeTable(const PriorityStructure& ps, const TierStructure& tiers,
               Mechanism mech, const StrategySpace& space,
               const Limits& limits = {});

  int num_students() const { return num_students_; }
  int num_strategies() const { return num_strategies_; }
  int64_t size() const { return size_; }
  int64_t stride(StudentIndex i) const { return strides_[i]; }

  int strategy_of(int64_t profile, StudentIndex i) const {
    return static_cast<int>((profile / strides_[i]) % num_strategies_);
  }
  int64_t encode(std::span<const int> strategies) const;
  std::vector<int> decode(int64_t profile) const;
  Profile profile(int64_t index) const;

  SchoolIndex assignment(int64_t profile, StudentIndex i) const {
    return cells_[profile * num_students_ + i];
  }
  Matching matching(int64_t profile) const;
  const StrategySpace& space() const { return *space_; }

 private:
  const StrategySpace* space_;
  int num_students_;
  int num_strategies_;
  int64_t size_;
  std::vector<int64_t> strides_;
  std::vector<int8_t> cells_;
};

// Throws Error(kGuard) when strategies^students exceeds the profile guard.
int64_t checked_profile_count(int num_strategies, int num_students,
                              int64_t guard);

// Indices of the Nash equilibria of the table under the true profile.
std::vector<int64_t> nash_profile_indices(const OutcomeTable& table,
                                          const Profile& truth,
                                          int jobs = 1);

// Weak dominance among canonical strategies, per student, against every
// opponent profile, with outcomes ranked by the true preference.
class DominanceTable {
 public:
  DominanceTable(const OutcomeTable& table, const Profile& truth);

  bool dominated(StudentIndex i, int strategy) const {
    return dominator_[i][strategy] >= 0;
  }
  // First dominating strategy by index, or -1.
  int dominator(StudentIndex i, int strategy) const {
    return dominator_[i][strategy];
  }

 private:
  std::vector<std::vector<int>> dominator_;
};

struct EquilibriumReport {
  Mechanism mechanism = Mechanism::kTda;
  TierStructure tiers;
  bool undominated_only = false;
  std::vector<Profile> equilibria;  // in profile-index order
  std::vector<Matching> outcomes;   // sorted, distinct
};

bool is_nash(const Problem& problem, const TierStructure& tiers,
             Mechanism mech, const Profile& reports,
             const Limits& limits = {});

EquilibriumReport enumerate_nash_outcomes(const Problem& problem,
                                          const TierStructure& tiers,
                                          Mechanism mech,
                                          const Limits& limits = {});

EquilibriumReport enumerate_undominated_nash_outcomes(
    const Problem& problem, const TierStructure& tiers, Mechanism mech,
    const Limits& limits = {});

// Dominating canonical strategy when `strategy` is weakly dominated.
std::optional<Preference> is_weakly_dominated(const Problem& problem,
                                              const TierStructure& tiers,
                                              Mechanism mech,
                                              StudentIndex student,
                                              const Preference& strategy,
                                              const Limits& limits = {});

struct Deviation {
  StudentIndex student = 0;
  Preference report;
  SchoolIndex outcome = kSelf;
};

// The first student (by index) with a profitable deviation from `reports`,
// together with that student's best response (ties by strategy index).
std::optional<Deviation> find_profitable_deviation(
    const Problem& problem, const TierStructure& tiers, Mechanism mech,
    const Profile& reports, const Limits& limits = {});

// find_profitable_deviation at the truthful profile.
std::optional<Deviation> is_manipulable_at(const Problem& problem,
                                           const TierStructure& tiers,
                                           Mechanism mech,
                                           const Limits& limits = {});

Preference reshuffle(const Preference& report, const TierStructure& tiers,
                     const std::vector<std::string>& school_ids);

// Acceptable schools appear in non-decreasing tier order.
bool is_aligned(const Preference& p, const TierStructure& tiers);

// Each tier's acceptable schools, in the slots they occupy in `report`,
// reordered by the true preference.
Preference within_tier_consistent(const Preference& report,
                                  const Preference& truth,
                                  const TierStructure& tiers);

struct AlignedCheck {
  bool all_aligned = true;
  bool strategy_proof = true;
  std::optional<Deviation> witness;
  // Present when some preference is unaligned: the environment in which
  // `witness` is profitable.
  std::optional<Problem> environment;
};

// With every true preference aligned, scans each student's deviations
// against every opponent profile. Otherwise builds the environment in
// which dropping the earlier-tier school pays off.
AlignedCheck check_aligned_domain_strategyproofness(
    const Problem& problem, const TierStructure& tiers,
    const Limits& limits = {});

struct CycleCounterexample {
  Profile truth;
  Profile equilibrium;
  Matching outcome;
};

// Builds the profile pair in which the cycle yields an unstable equilibrium
// outcome, and verifies both properties. Throws Error(kPrecondition) if the
// cycle spans two tiers.
CycleCounterexample construct_cycle_counterexample(const Problem& base,
                                                   const TierStructure& tiers,
                                                   const Cycle& cycle,
                                                   const Limits& limits = {});

struct WelfareCounterexample {
  Problem problem;  // truthful preferences installed
  Profile equilibrium;
  Matching sosm;
  Matching outcome;
  Verdict verdict;  // equilibrium set of s* relative to its SOSM set
};

// One companion in the tier of `target` or two companions sharing another
// tier. Uses the first three students as i, j, k; every quota becomes 1.
// Throws Error(kPrecondition) with fewer than three students or when the
// companions do not fit either case.
WelfareCounterexample construct_welfare_counterexample(
    const Problem& base, const TierStructure& tiers, SchoolIndex target,
    std::span<const SchoolIndex> companions, const Limits& limits = {});

}  // namespace tiermatch

#endif  // TIERMATCH_GAME_HPP_
