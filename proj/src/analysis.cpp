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

#include "tiermatch/analysis.hpp"

#include <algorithm>

#include "tiermatch/mechanisms.hpp"

namespace tiermatch {
namespace {

void check_shape(const PriorityStructure& ps, const Matching& m,
                 std::span<const Preference> evaluation) {
  if (static_cast<int>(m.assignment.size()) != ps.num_students ||
      static_cast<int>(evaluation.size()) != ps.num_students) {
    throw Error(ErrorKind::kInput, "matching does not cover every student");
  }
  for (SchoolIndex s : m.assignment) {
    if (s != kSelf && (s < 0 || s >= ps.num_schools())) {
      throw Error(ErrorKind::kInput, "matching references unknown school");
    }
  }
}

void enumerate_assignments(const PriorityStructure& ps,
                           std::span<const Preference> prefs, int student,
                           std::vector<int>& load, Matching& current,
                           std::vector<Matching>& out) {
  if (student == ps.num_students) {
    if (is_stable(ps, current, prefs)) out.push_back(current);
    return;
  }
  for (SchoolIndex s = kSelf; s < ps.num_schools(); ++s) {
    if (s != kSelf && load[s] >= ps.quotas[s]) continue;
    if (s != kSelf) ++load[s];
    current.assignment[student] = s;
    enumerate_assignments(ps, prefs, student + 1, load, current, out);
    if (s != kSelf) --load[s];
  }
}

// Picks `need` students from `pool` in priority order.
std::vector<StudentIndex> take_best(std::vector<StudentIndex> pool,
                                    size_t need, const PriorityOrder& prio) {
  std::sort(pool.begin(), pool.end(), [&](StudentIndex x, StudentIndex y) {
    return prio.higher(x, y);
  });
  if (pool.size() > need) pool.resize(need);
  return pool;
}

}  // namespace

bool StabilityReport::has_pair(StudentIndex i, SchoolIndex s) const {
  return std::any_of(blocking_pairs.begin(), blocking_pairs.end(),
                     [&](const BlockingPair& bp) {
                       return bp.student == i && bp.school == s;
                     });
}

StabilityReport find_blocking_pairs(const PriorityStructure& ps,
                                    const Matching& matching,
                                    std::span<const Preference> evaluation) {
  check_shape(ps, matching, evaluation);
  StabilityReport report;
  std::vector<std::vector<StudentIndex>> holders(ps.num_schools());
  for (StudentIndex i = 0; i < ps.num_students; ++i) {
    if (matching[i] != kSelf) holders[matching[i]].push_back(i);
  }
  for (StudentIndex i = 0; i < ps.num_students; ++i) {
    const Preference& pref = evaluation[i];
    const SchoolIndex mine = matching[i];
    if (mine != kSelf && !pref.is_acceptable(mine)) {
      report.ir_violations.push_back(i);
    }
    for (SchoolIndex s = 0; s < ps.num_schools(); ++s) {
      if (s == mine || !pref.prefers(s, mine)) continue;
      const bool envy = std::any_of(
          holders[s].begin(), holders[s].end(),
          [&](StudentIndex j) { return ps.priorities[s].higher(i, j); });
      if (envy) {
        report.blocking_pairs.push_back({i, s, BlockKind::kJustifiedEnvy});
      } else if (static_cast<int>(holders[s].size()) < ps.quotas[s]) {
        report.blocking_pairs.push_back({i, s, BlockKind::kWasteful});
      }
    }
  }
  return report;
}

bool is_stable(const PriorityStructure& ps, const Matching& matching,
               std::span<const Preference> evaluation) {
  return find_blocking_pairs(ps, matching, evaluation).stable();
}

bool is_stable_wrt_tiers(const PriorityStructure& ps,
                         const TierStructure& tiers, const Matching& matching,
                         std::span<const Preference> evaluation) {
  const StabilityReport report =
      find_blocking_pairs(ps, matching, evaluation);
  if (!report.ir_violations.empty()) return false;
  for (const BlockingPair& bp : report.blocking_pairs) {
    const SchoolIndex mine = matching[bp.student];
    if (mine == kSelf) return false;
    if (tiers.tier_of(mine) >= tiers.tier_of(bp.school)) return false;
  }
  return true;
}

std::vector<Matching> stable_set(const PriorityStructure& ps,
                                 std::span<const Preference> preferences,
                                 int max_cells) {
  if (ps.num_students * ps.num_schools() > max_cells) {
    throw Error(ErrorKind::kGuard,
                "stable set enumeration needs |I|*|S| <= " +
                    std::to_string(max_cells));
  }
  std::vector<Matching> out;
  std::vector<int> load(ps.num_schools(), 0);
  Matching current;
  current.assignment.assign(ps.num_students, kSelf);
  enumerate_assignments(ps, preferences, 0, load, current, out);
  std::sort(out.begin(), out.end());
  return out;
}

Matching sosm(const PriorityStructure& ps,
              std::span<const Preference> preferences) {
  return deferred_acceptance(ps, preferences);
}

std::vector<Cycle> find_cycles(const PriorityStructure& ps,
                               std::span<const SchoolIndex> subset) {
  std::vector<Cycle> out;
  const int n = ps.num_students;
  for (SchoolIndex a : subset) {
    for (SchoolIndex b : subset) {
      if (a == b || ps.quotas[a] < 1 || ps.quotas[b] < 1) continue;
      const PriorityOrder& pa = ps.priorities[a];
      const PriorityOrder& pb = ps.priorities[b];
      const size_t need_a = static_cast<size_t>(ps.quotas[a] - 1);
      const size_t need_b = static_cast<size_t>(ps.quotas[b] - 1);
      for (StudentIndex i = 0; i < n; ++i) {
        for (StudentIndex j = 0; j < n; ++j) {
          if (j == i || !pa.higher(i, j)) continue;
          for (StudentIndex k = 0; k < n; ++k) {
            if (k == i || k == j || !pa.higher(j, k) || !pb.higher(k, i)) {
              continue;
            }
            // Scarcity candidates: above j at a, above i at b.
            std::vector<StudentIndex> a_only, b_only, shared;
            for (StudentIndex l = 0; l < n; ++l) {
              if (l == i || l == j || l == k) continue;
              const bool in_a = pa.higher(l, j);
              const bool in_b = pb.higher(l, i);
              if (in_a && in_b) {
                shared.push_back(l);
              } else if (in_a) {
                a_only.push_back(l);
              } else if (in_b) {
                b_only.push_back(l);
              }
            }
            std::vector<StudentIndex> set_a = take_best(a_only, need_a, pa);
            std::vector<StudentIndex> shared_left = shared;
            if (set_a.size() < need_a) {
              std::vector<StudentIndex> extra =
                  take_best(shared, need_a - set_a.size(), pa);
              for (StudentIndex l : extra) {
                set_a.push_back(l);
                shared_left.erase(std::find(shared_left.begin(),
                                            shared_left.end(), l));
              }
            }
            if (set_a.size() < need_a) continue;
            std::vector<StudentIndex> set_b = take_best(b_only, need_b, pb);
            if (set_b.size() < need_b) {
              std::vector<StudentIndex> extra =
                  take_best(shared_left, need_b - set_b.size(), pb);
              set_b.insert(set_b.end(), extra.begin(), extra.end());
            }
            if (set_b.size() < need_b) continue;
            std::sort(set_a.begin(), set_a.end(),
                      [&](StudentIndex x, StudentIndex y) {
                        return pa.higher(x, y);
                      });
            std::sort(set_b.begin(), set_b.end(),
                      [&](StudentIndex x, StudentIndex y) {
                        return pb.higher(x, y);
                      });
            out.push_back({a, b, i, j, k, std::move(set_a), std::move(set_b)});
          }
        }
      }
    }
  }
  return out;
}

std::vector<Cycle> find_within_tier_cycles(const PriorityStructure& ps,
                                           const TierStructure& tiers) {
  std::vector<Cycle> out;
  for (int k = 1; k <= tiers.count(); ++k) {
    const std::vector<SchoolIndex> schools = tiers.schools_in(k);
    std::vector<Cycle> found = find_cycles(ps, schools);
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

bool is_within_tier_acyclic(const PriorityStructure& ps,
                            const TierStructure& tiers) {
  for (int k = 1; k <= tiers.count(); ++k) {
    if (!find_cycles(ps, tiers.schools_in(k)).empty()) return false;
  }
  return true;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kBetter: return "better";
    case Verdict::kWorse: return "worse";
    case Verdict::kEqual: return "equal";
    case Verdict::kIncomparable: return "incomparable";
  }
  return "unknown";
}

Verdict responsive_dominates(std::span<const StudentIndex> a,
                             std::span<const StudentIndex> b, int quota,
                             const PriorityOrder& priority) {
  if (static_cast<int>(a.size()) > quota ||
      static_cast<int>(b.size()) > quota) {
    throw Error(ErrorKind::kPrecondition, "student set exceeds quota");
  }
  // Empty seats rank below every student.
  const int empty_seat = static_cast<int>(priority.ranking().size());
  auto seats = [&](std::span<const StudentIndex> set) {
    std::vector<int> pos(quota, empty_seat);
    for (size_t k = 0; k < set.size(); ++k) {
      pos[k] = priority.position(set[k]);
    }
    std::sort(pos.begin(), pos.end());
    return pos;
  };
  const std::vector<int> sa = seats(a);
  const std::vector<int> sb = seats(b);
  bool some_better = false, some_worse = false;
  for (int k = 0; k < quota; ++k) {
    if (sa[k] < sb[k]) some_better = true;
    if (sa[k] > sb[k]) some_worse = true;
  }
  if (some_better && some_worse) return Verdict::kIncomparable;
  if (some_better) return Verdict::kBetter;
  if (some_worse) return Verdict::kWorse;
  return Verdict::kEqual;
}

bool is_refinement(const TierStructure& fine, const TierStructure& coarse) {
  const int m = coarse.num_schools();
  if (fine.num_schools() != m) {
    throw Error(ErrorKind::kInput, "tier structures differ in school count");
  }
  for (SchoolIndex a = 0; a < m; ++a) {
    for (SchoolIndex b = 0; b < m; ++b) {
      if (coarse.tier_of(a) > coarse.tier_of(b) &&
          !(fine.tier_of(a) > fine.tier_of(b))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace tiermatch
