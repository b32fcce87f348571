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

#include "tiermatch/mechanisms.hpp"

#include <algorithm>
#include <numeric>

namespace tiermatch {

std::string mechanism_name(Mechanism m) {
  return m == Mechanism::kDa ? "da" : "tda";
}

Mechanism parse_mechanism(const std::string& name) {
  if (name == "da") return Mechanism::kDa;
  if (name == "tda") return Mechanism::kTda;
  throw Error(ErrorKind::kInput, "unknown mechanism '" + name + "'");
}

Matching deferred_acceptance(const PriorityStructure& ps,
                             std::span<const Preference> reports,
                             std::span<const StudentIndex> participants,
                             std::span<const SchoolIndex> school_subset) {
  const int n = ps.num_students;
  const int m = ps.num_schools();
  std::vector<bool> in_subset(m, false);
  for (SchoolIndex s : school_subset) in_subset[s] = true;

  // Proposal lists: acceptable prefix restricted to the subset.
  std::vector<std::vector<SchoolIndex>> lists(n);
  for (StudentIndex i : participants) {
    for (SchoolIndex s : reports[i].acceptable) {
      if (in_subset[s]) lists[i].push_back(s);
    }
  }

  std::vector<size_t> next(n, 0);
  std::vector<std::vector<StudentIndex>> held(m);
  Matching out;
  out.assignment.assign(n, kSelf);

  // Students with a pending proposal, processed in id order each step.
  std::vector<StudentIndex> free(participants.begin(), participants.end());
  std::sort(free.begin(), free.end());
  while (true) {
    std::vector<SchoolIndex> touched;
    for (StudentIndex i : free) {
      if (next[i] >= lists[i].size()) continue;
      const SchoolIndex s = lists[i][next[i]++];
      held[s].push_back(i);
      touched.push_back(s);
    }
    if (touched.empty()) break;
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    free.clear();
    for (SchoolIndex s : touched) {
      auto& h = held[s];
      const auto& prio = ps.priorities[s];
      std::sort(h.begin(), h.end(), [&](StudentIndex a, StudentIndex b) {
        return prio.higher(a, b);
      });
      const size_t q = static_cast<size_t>(ps.quotas[s]);
      for (size_t k = q; k < h.size(); ++k) free.push_back(h[k]);
      if (h.size() > q) h.resize(q);
    }
    std::sort(free.begin(), free.end());
  }
  for (SchoolIndex s = 0; s < m; ++s) {
    for (StudentIndex i : held[s]) out.assignment[i] = s;
  }
  return out;
}

Matching deferred_acceptance(const PriorityStructure& ps,
                             std::span<const Preference> reports) {
  std::vector<StudentIndex> everyone(ps.num_students);
  std::iota(everyone.begin(), everyone.end(), 0);
  std::vector<SchoolIndex> all_schools(ps.num_schools());
  std::iota(all_schools.begin(), all_schools.end(), 0);
  return deferred_acceptance(ps, reports, everyone, all_schools);
}

TdaTrace tiered_deferred_acceptance(const PriorityStructure& ps,
                                    const TierStructure& tiers,
                                    std::span<const Preference> reports) {
  TdaTrace trace;
  trace.final.assignment.assign(ps.num_students, kSelf);
  std::vector<StudentIndex> unmatched(ps.num_students);
  std::iota(unmatched.begin(), unmatched.end(), 0);

  for (int k = 1; k <= tiers.count(); ++k) {
    const std::vector<SchoolIndex> tier_schools = tiers.schools_in(k);
    TdaRound round;
    round.tier = k;
    round.participants = unmatched;
    round.matching =
        deferred_acceptance(ps, reports, unmatched, tier_schools);
    std::vector<StudentIndex> still;
    for (StudentIndex i : unmatched) {
      if (round.matching[i] != kSelf) {
        trace.final.assignment[i] = round.matching[i];
      } else {
        still.push_back(i);
      }
    }
    unmatched = std::move(still);
    trace.rounds.push_back(std::move(round));
  }
  return trace;
}

Matching run_mechanism(Mechanism mech, const PriorityStructure& ps,
                       const TierStructure& tiers,
                       std::span<const Preference> reports) {
  if (mech == Mechanism::kDa) return deferred_acceptance(ps, reports);
  return tiered_deferred_acceptance(ps, tiers, reports).final;
}

TierStructure finest_tiers(int num_schools,
                           std::span<const SchoolIndex> order) {
  std::vector<int> labels(num_schools, 0);
  if (static_cast<int>(order.size()) != num_schools) {
    throw Error(ErrorKind::kInput, "school order is not a permutation");
  }
  for (size_t k = 0; k < order.size(); ++k) {
    const SchoolIndex s = order[k];
    if (s < 0 || s >= num_schools || labels[s] != 0) {
      throw Error(ErrorKind::kInput, "school order is not a permutation");
    }
    labels[s] = static_cast<int>(k) + 1;
  }
  return TierStructure(labels);
}

}  // namespace tiermatch
