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

#include "tiermatch/types.hpp"

#include <algorithm>
#include <numeric>

namespace tiermatch {
namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out;
  for (const auto& s : issues) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)),
      kind_(kind),
      issues_(std::move(issues)) {}

int Preference::rank(SchoolIndex alternative) const {
  const int self_rank = static_cast<int>(acceptable.size());
  if (alternative == kSelf) return self_rank;
  auto it = std::find(acceptable.begin(), acceptable.end(), alternative);
  if (it != acceptable.end()) {
    return static_cast<int>(it - acceptable.begin());
  }
  auto jt = std::find(unacceptable.begin(), unacceptable.end(), alternative);
  if (jt != unacceptable.end()) {
    return self_rank + 1 + static_cast<int>(jt - unacceptable.begin());
  }
  throw Error(ErrorKind::kPrecondition,
              "school " + std::to_string(alternative) + " not ranked");
}

bool Preference::is_acceptable(SchoolIndex s) const {
  return std::find(acceptable.begin(), acceptable.end(), s) !=
         acceptable.end();
}

std::vector<int> Preference::rank_table(int num_schools) const {
  std::vector<int> table(num_schools + 1, 0);
  for (int s = 0; s < num_schools; ++s) table[s] = rank(s);
  table[num_schools] = rank(kSelf);
  return table;
}

PriorityOrder::PriorityOrder(std::vector<StudentIndex> ranking)
    : ranking_(std::move(ranking)), position_(ranking_.size(), -1) {
  for (size_t p = 0; p < ranking_.size(); ++p) {
    const StudentIndex i = ranking_[p];
    if (i < 0 || i >= static_cast<int>(ranking_.size()) ||
        position_[i] != -1) {
      throw Error(ErrorKind::kInput, "priority not a permutation");
    }
    position_[i] = static_cast<int>(p);
  }
}

TierStructure::TierStructure(std::vector<int> tier_of)
    : tier_of_(std::move(tier_of)) {
  count_ = tier_of_.empty()
               ? 0
               : *std::max_element(tier_of_.begin(), tier_of_.end());
  std::vector<std::string> issues;
  std::vector<bool> used(count_ + 1, false);
  for (int t : tier_of_) {
    if (t < 1) {
      issues.push_back("tier labels must be positive, got " +
                       std::to_string(t));
    } else {
      used[t] = true;
    }
  }
  for (int k = 1; k <= count_; ++k) {
    if (!used[k]) issues.push_back("tier " + std::to_string(k) + " empty");
  }
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
}

std::vector<SchoolIndex> TierStructure::schools_in(int k) const {
  std::vector<SchoolIndex> out;
  for (int s = 0; s < num_schools(); ++s) {
    if (tier_of_[s] == k) out.push_back(s);
  }
  return out;
}

std::vector<StudentIndex> Matching::assigned_to(SchoolIndex s) const {
  std::vector<StudentIndex> out;
  for (size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == s) out.push_back(static_cast<StudentIndex>(i));
  }
  return out;
}

StudentIndex Problem::student_index(const std::string& id) const {
  auto it = std::find(students.begin(), students.end(), id);
  if (it == students.end()) {
    throw Error(ErrorKind::kInput, "unknown student '" + id + "'");
  }
  return static_cast<StudentIndex>(it - students.begin());
}

SchoolIndex Problem::school_index(const std::string& id) const {
  auto it = std::find(schools.begin(), schools.end(), id);
  if (it == schools.end()) {
    throw Error(ErrorKind::kInput, "unknown school '" + id + "'");
  }
  return static_cast<SchoolIndex>(it - schools.begin());
}

Problem Problem::with_tiers(TierStructure t) const {
  if (t.num_schools() != num_schools()) {
    throw Error(ErrorKind::kInput,
                "tier vector has " + std::to_string(t.num_schools()) +
                    " entries, expected " + std::to_string(num_schools()));
  }
  Problem out = *this;
  out.tiers = std::move(t);
  return out;
}

Problem Problem::with_preferences(Profile p) const {
  std::vector<std::string> issues;
  if (p.size() != preferences.size()) {
    issues.push_back("profile size mismatch");
  } else {
    for (size_t i = 0; i < p.size(); ++i) {
      check_preference(p[i], num_schools(), "student " + students[i], issues);
    }
  }
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
  Problem out = *this;
  out.preferences = std::move(p);
  return out;
}

Preference restrict_preference(const Preference& p,
                               std::span<const SchoolIndex> subset,
                               int num_schools) {
  std::vector<bool> keep(num_schools, false);
  for (SchoolIndex s : subset) {
    if (s < 0 || s >= num_schools) {
      throw Error(ErrorKind::kInput,
                  "unknown school index " + std::to_string(s));
    }
    keep[s] = true;
  }
  Preference out;
  for (SchoolIndex s : p.acceptable) {
    if (keep[s]) out.acceptable.push_back(s);
  }
  for (SchoolIndex s : p.unacceptable) {
    if (keep[s]) out.unacceptable.push_back(s);
  }
  return out;
}

Preference canonicalize(const Preference& p,
                        const std::vector<std::string>& school_ids) {
  Preference out = p;
  std::sort(out.unacceptable.begin(), out.unacceptable.end(),
            [&](SchoolIndex a, SchoolIndex b) {
              return school_ids[a] < school_ids[b];
            });
  return out;
}

Preference make_preference(std::vector<SchoolIndex> acceptable,
                           const std::vector<std::string>& school_ids) {
  Preference out;
  std::vector<bool> listed(school_ids.size(), false);
  for (SchoolIndex s : acceptable) listed[s] = true;
  out.acceptable = std::move(acceptable);
  for (size_t s = 0; s < school_ids.size(); ++s) {
    if (!listed[s]) out.unacceptable.push_back(static_cast<SchoolIndex>(s));
  }
  return canonicalize(out, school_ids);
}

void check_preference(const Preference& p, int num_schools,
                      const std::string& owner,
                      std::vector<std::string>& issues) {
  std::vector<int> seen(num_schools, 0);
  bool bad_index = false;
  for (const auto* list : {&p.acceptable, &p.unacceptable}) {
    for (SchoolIndex s : *list) {
      if (s < 0 || s >= num_schools) {
        bad_index = true;
      } else {
        ++seen[s];
      }
    }
  }
  if (bad_index) {
    issues.push_back(owner + ": preference names an unknown school");
  }
  for (int s = 0; s < num_schools; ++s) {
    if (seen[s] > 1) {
      issues.push_back(owner + ": preference lists a school twice");
      return;
    }
    if (seen[s] == 0) {
      issues.push_back(owner + ": preference does not rank every school");
      return;
    }
  }
}

std::string format_matching(const Problem& problem, const Matching& m) {
  std::string out = "(";
  bool first = true;
  for (int i = 0; i < problem.num_students(); ++i) {
    if (m[i] == kSelf) continue;
    if (!first) out += ",";
    first = false;
    out += "(" + problem.students[i] + "," + problem.schools[m[i]] + ")";
  }
  return out + ")";
}

std::string format_preference(const Problem& problem, const Preference& p) {
  std::string out = "(";
  for (size_t k = 0; k < p.acceptable.size(); ++k) {
    if (k) out += ",";
    out += problem.schools[p.acceptable[k]];
  }
  out += " |";
  for (size_t k = 0; k < p.unacceptable.size(); ++k) {
    out += (k ? "," : " ");
    out += problem.schools[p.unacceptable[k]];
  }
  return out + ")";
}

}  // namespace tiermatch
