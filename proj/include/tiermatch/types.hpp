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

#ifndef TIERMATCH_TYPES_HPP_
#define TIERMATCH_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tiermatch {

// Students and schools are referred to by their position in the enclosing
// Problem's id lists. A student's own "self" alternative (being unmatched)
// is kSelf wherever a school index is expected.
using StudentIndex = int;
using SchoolIndex = int;
inline constexpr SchoolIndex kSelf = -1;

enum class ErrorKind {
  kInput,         // malformed or invalid input data
  kGuard,         // an enumeration size guard was exceeded
  kPrecondition,  // operation called outside its domain
};

// All failures raised by the library. `issues` carries every violated
// invariant for validation errors; what() joins them.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::vector<std::string> issues);
  Error(ErrorKind kind, const std::string& message)
      : Error(kind, std::vector<std::string>{message}) {}

  ErrorKind kind() const { return kind_; }
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  ErrorKind kind_;
  std::vector<std::string> issues_;
};

// A strict ranking over schools and self. Schools in `acceptable` are ranked
// above self (best first); schools in `unacceptable` below it.
struct Preference {
  std::vector<SchoolIndex> acceptable;
  std::vector<SchoolIndex> unacceptable;

  // Position in acceptable ++ [self] ++ unacceptable; lower is better.
  int rank(SchoolIndex alternative) const;
  bool prefers(SchoolIndex x, SchoolIndex y) const {
    return rank(x) < rank(y);
  }
  bool is_acceptable(SchoolIndex s) const;
  // Rank table indexed by school with self at the back (size num_schools+1).
  std::vector<int> rank_table(int num_schools) const;

  friend bool operator==(const Preference&, const Preference&) = default;
  friend auto operator<=>(const Preference&, const Preference&) = default;
};

using Profile = std::vector<Preference>;

class PriorityOrder {
 public:
  PriorityOrder() = default;
  explicit PriorityOrder(std::vector<StudentIndex> ranking);

  const std::vector<StudentIndex>& ranking() const { return ranking_; }
  // 0 is the highest priority.
  int position(StudentIndex i) const { return position_[i]; }
  bool higher(StudentIndex i, StudentIndex j) const {
    return position_[i] < position_[j];
  }

  friend bool operator==(const PriorityOrder& a, const PriorityOrder& b) {
    return a.ranking_ == b.ranking_;
  }

 private:
  std::vector<StudentIndex> ranking_;
  std::vector<int> position_;
};

class TierStructure {
 public:
  TierStructure() = default;
  // Throws Error(kInput) unless the labels cover exactly 1..T.
  explicit TierStructure(std::vector<int> tier_of);

  int tier_of(SchoolIndex s) const { return tier_of_[s]; }
  const std::vector<int>& labels() const { return tier_of_; }
  int count() const { return count_; }
  int num_schools() const { return static_cast<int>(tier_of_.size()); }
  // Schools of tier k (1-based), in index order.
  std::vector<SchoolIndex> schools_in(int k) const;

  friend bool operator==(const TierStructure&, const TierStructure&) = default;

 private:
  std::vector<int> tier_of_;
  int count_ = 0;
};

// Quotas and priorities: the part of a problem that is fixed while students
// choose their reports.
struct PriorityStructure {
  int num_students = 0;
  std::vector<int> quotas;
  std::vector<PriorityOrder> priorities;

  int num_schools() const { return static_cast<int>(quotas.size()); }
};

struct Matching {
  std::vector<SchoolIndex> assignment;  // kSelf when unmatched

  SchoolIndex operator[](StudentIndex i) const { return assignment[i]; }
  std::vector<StudentIndex> assigned_to(SchoolIndex s) const;

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;
};

// A validated school choice problem with its tier structure and the true
// preference profile. Immutable once built by validate_problem.
struct Problem {
  std::vector<std::string> students;
  std::vector<std::string> schools;
  PriorityStructure structure;
  TierStructure tiers;
  Profile preferences;
  // Optional named report profiles carried by a scenario (e.g. "Q").
  std::map<std::string, Profile> reports;

  int num_students() const { return static_cast<int>(students.size()); }
  int num_schools() const { return static_cast<int>(schools.size()); }
  const std::vector<int>& quotas() const { return structure.quotas; }
  const std::vector<PriorityOrder>& priorities() const {
    return structure.priorities;
  }

  StudentIndex student_index(const std::string& id) const;
  SchoolIndex school_index(const std::string& id) const;

  Problem with_tiers(TierStructure t) const;
  Problem with_preferences(Profile p) const;
};

// Returns the preference restricted to `subset` (order preserved; schools
// outside the subset are dropped). Throws on an out-of-range school.
Preference restrict_preference(const Preference& p,
                               std::span<const SchoolIndex> subset,
                               int num_schools);

// Canonical representative: acceptable prefix unchanged, tail sorted by
// school id.
Preference canonicalize(const Preference& p,
                        const std::vector<std::string>& school_ids);

// Preference listing exactly `acceptable`, with the canonical tail.
Preference make_preference(std::vector<SchoolIndex> acceptable,
                           const std::vector<std::string>& school_ids);

// Throws Error(kInput) listing every violated invariant.
void check_preference(const Preference& p, int num_schools,
                      const std::string& owner,
                      std::vector<std::string>& issues);

// Renders a matching as ((1,c),(2,b)); unmatched students are omitted.
std::string format_matching(const Problem& problem, const Matching& m);
std::string format_preference(const Problem& problem, const Preference& p);

}  // namespace tiermatch

#endif  // TIERMATCH_TYPES_HPP_
