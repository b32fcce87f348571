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

#include "tiermatch/scenario.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace tiermatch {
namespace {

using json = nlohmann::ordered_json;

void check_ids(const std::vector<std::string>& ids, const std::string& what,
               std::vector<std::string>& issues) {
  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (id.empty()) issues.push_back("empty " + what + " id");
    if (!seen.insert(id).second) {
      issues.push_back("duplicate " + what + " id '" + id + "'");
    }
  }
}

template <class Map>
void check_total(const Map& m, const std::vector<std::string>& ids,
                 const std::string& what, std::vector<std::string>& issues) {
  for (const auto& id : ids) {
    if (!m.contains(id)) issues.push_back(what + " missing for '" + id + "'");
  }
  for (const auto& [key, value] : m) {
    if (std::find(ids.begin(), ids.end(), key) == ids.end()) {
      issues.push_back(what + " given for unknown id '" + key + "'");
    }
  }
}

int index_in(const std::vector<std::string>& ids, const std::string& id) {
  auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : static_cast<int>(it - ids.begin());
}

Preference convert_preference(const RawPreference& raw,
                              const std::vector<std::string>& schools,
                              const std::string& owner,
                              std::vector<std::string>& issues) {
  Preference p;
  bool ok = true;
  for (const auto& s : raw.acceptable) {
    const int k = index_in(schools, s);
    if (k < 0) {
      issues.push_back(owner + ": unknown school '" + s + "'");
      ok = false;
    } else {
      p.acceptable.push_back(k);
    }
  }
  if (raw.unacceptable) {
    for (const auto& s : *raw.unacceptable) {
      const int k = index_in(schools, s);
      if (k < 0) {
        issues.push_back(owner + ": unknown school '" + s + "'");
        ok = false;
      } else {
        p.unacceptable.push_back(k);
      }
    }
  } else if (ok) {
    std::vector<bool> listed(schools.size(), false);
    for (int s : p.acceptable) listed[s] = true;
    for (size_t s = 0; s < schools.size(); ++s) {
      if (!listed[s]) p.unacceptable.push_back(static_cast<int>(s));
    }
    p = canonicalize(p, schools);
  }
  if (ok) {
    check_preference(p, static_cast<int>(schools.size()), owner, issues);
  }
  return p;
}

Profile convert_profile(const RawProfile& raw,
                        const std::vector<std::string>& students,
                        const std::vector<std::string>& schools,
                        const std::string& what,
                        std::vector<std::string>& issues) {
  check_total(raw, students, what, issues);
  Profile out(students.size());
  for (size_t i = 0; i < students.size(); ++i) {
    auto it = raw.find(students[i]);
    if (it == raw.end()) continue;
    out[i] = convert_preference(it->second, schools,
                                what + " of student '" + students[i] + "'",
                                issues);
  }
  return out;
}

RawPreference raw_preference_from_json(const json& j) {
  RawPreference p;
  if (j.is_array()) {
    p.acceptable = j.get<std::vector<std::string>>();
    return p;
  }
  p.acceptable = j.at("acceptable").get<std::vector<std::string>>();
  if (j.contains("unacceptable")) {
    p.unacceptable = j.at("unacceptable").get<std::vector<std::string>>();
  }
  return p;
}

RawProfile raw_profile_from_json(const json& j) {
  RawProfile out;
  for (const auto& [id, pref] : j.items()) {
    out[id] = raw_preference_from_json(pref);
  }
  return out;
}

json raw_preference_to_json(const RawPreference& p) {
  json j;
  j["acceptable"] = p.acceptable;
  j["unacceptable"] = p.unacceptable.value_or(std::vector<std::string>{});
  return j;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInput, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

Problem validate_problem(const RawProblem& raw) {
  std::vector<std::string> issues;
  check_ids(raw.students, "student", issues);
  check_ids(raw.schools, "school", issues);
  check_total(raw.quotas, raw.schools, "quota", issues);
  check_total(raw.priorities, raw.schools, "priority", issues);
  check_total(raw.tiers, raw.schools, "tier", issues);

  Problem p;
  p.students = raw.students;
  p.schools = raw.schools;
  const int n = static_cast<int>(raw.students.size());
  const int m = static_cast<int>(raw.schools.size());
  p.structure.num_students = n;
  p.structure.quotas.assign(m, 0);
  p.structure.priorities.resize(m);

  std::vector<int> tier_labels(m, 1);
  for (int s = 0; s < m; ++s) {
    const std::string& id = raw.schools[s];
    if (auto q = raw.quotas.find(id); q != raw.quotas.end()) {
      if (q->second < 0) {
        issues.push_back("negative quota for school '" + id + "'");
      } else {
        p.structure.quotas[s] = static_cast<int>(q->second);
      }
    }
    if (auto pr = raw.priorities.find(id); pr != raw.priorities.end()) {
      std::vector<int> ranking;
      bool ok = pr->second.size() == raw.students.size();
      for (const auto& sid : pr->second) {
        const int k = index_in(raw.students, sid);
        if (k < 0) ok = false;
        ranking.push_back(k);
      }
      if (ok) {
        try {
          p.structure.priorities[s] = PriorityOrder(ranking);
        } catch (const Error&) {
          ok = false;
        }
      }
      if (!ok) {
        issues.push_back("priority not a permutation for school '" + id +
                         "'");
      }
    }
    if (auto t = raw.tiers.find(id); t != raw.tiers.end()) {
      tier_labels[s] = static_cast<int>(t->second);
    }
  }
  try {
    p.tiers = TierStructure(tier_labels);
  } catch (const Error& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }

  p.preferences = convert_profile(raw.preferences, raw.students, raw.schools,
                                  "preference", issues);
  for (const auto& [name, profile] : raw.reports) {
    p.reports[name] = convert_profile(profile, raw.students, raw.schools,
                                      "report '" + name + "'", issues);
  }
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
  return p;
}

Profile validate_profile(const Problem& problem, const RawProfile& raw) {
  std::vector<std::string> issues;
  Profile out = convert_profile(raw, problem.students, problem.schools,
                                "report", issues);
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
  return out;
}

RawProblem to_raw(const Problem& problem) {
  RawProblem raw;
  raw.students = problem.students;
  raw.schools = problem.schools;
  auto raw_profile = [&](const Profile& profile) {
    RawProfile out;
    for (int i = 0; i < problem.num_students(); ++i) {
      RawPreference rp;
      for (int s : profile[i].acceptable) {
        rp.acceptable.push_back(problem.schools[s]);
      }
      rp.unacceptable.emplace();
      for (int s : profile[i].unacceptable) {
        rp.unacceptable->push_back(problem.schools[s]);
      }
      out[problem.students[i]] = rp;
    }
    return out;
  };
  for (int s = 0; s < problem.num_schools(); ++s) {
    const std::string& id = problem.schools[s];
    raw.quotas[id] = problem.quotas()[s];
    raw.tiers[id] = problem.tiers.tier_of(s);
    auto& pr = raw.priorities[id];
    for (int i : problem.priorities()[s].ranking()) {
      pr.push_back(problem.students[i]);
    }
  }
  raw.preferences = raw_profile(problem.preferences);
  for (const auto& [name, profile] : problem.reports) {
    raw.reports[name] = raw_profile(profile);
  }
  return raw;
}

RawProblem parse_scenario(std::string_view json_text) {
  const json j = parse_json(json_text);
  RawProblem raw;
  try {
    raw.students = j.at("students").get<std::vector<std::string>>();
    raw.schools = j.at("schools").get<std::vector<std::string>>();
    for (const auto& [id, q] : j.at("quotas").items()) {
      raw.quotas[id] = q.get<long long>();
    }
    for (const auto& [id, pr] : j.at("priorities").items()) {
      raw.priorities[id] = pr.get<std::vector<std::string>>();
    }
    if (j.contains("tiers")) {
      for (const auto& [id, t] : j.at("tiers").items()) {
        raw.tiers[id] = t.get<long long>();
      }
    } else {
      for (const auto& id : raw.schools) raw.tiers[id] = 1;
    }
    if (j.contains("preferences")) {
      raw.preferences = raw_profile_from_json(j.at("preferences"));
    }
    if (j.contains("reports")) {
      for (const auto& [name, profile] : j.at("reports").items()) {
        raw.reports[name] = raw_profile_from_json(profile);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInput, std::string("malformed scenario: ") +
                                       e.what());
  }
  return raw;
}

std::string serialize_scenario(const RawProblem& raw) {
  json j;
  j["students"] = raw.students;
  j["schools"] = raw.schools;
  json quotas = json::object(), priorities = json::object(),
       tiers = json::object();
  for (const auto& id : raw.schools) {
    if (raw.quotas.contains(id)) quotas[id] = raw.quotas.at(id);
    if (raw.priorities.contains(id)) priorities[id] = raw.priorities.at(id);
    if (raw.tiers.contains(id)) tiers[id] = raw.tiers.at(id);
  }
  j["quotas"] = quotas;
  j["priorities"] = priorities;
  j["tiers"] = tiers;
  json prefs = json::object();
  for (const auto& id : raw.students) {
    if (raw.preferences.contains(id)) {
      prefs[id] = raw_preference_to_json(raw.preferences.at(id));
    }
  }
  j["preferences"] = prefs;
  if (!raw.reports.empty()) {
    json reports = json::object();
    for (const auto& [name, profile] : raw.reports) {
      json r = json::object();
      for (const auto& id : raw.students) {
        if (profile.contains(id)) {
          r[id] = raw_preference_to_json(profile.at(id));
        }
      }
      reports[name] = r;
    }
    j["reports"] = reports;
  }
  return j.dump(2);
}

Problem load_problem(std::string_view json_text) {
  return validate_problem(parse_scenario(json_text));
}

std::string save_problem(const Problem& problem) {
  return serialize_scenario(to_raw(problem));
}

Profile parse_profile(const Problem& problem, std::string_view json_text) {
  const json j = parse_json(json_text);
  try {
    const json& body = j.contains("preferences") ? j.at("preferences") : j;
    return validate_profile(problem, raw_profile_from_json(body));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInput,
                std::string("malformed profile: ") + e.what());
  }
}

Matching parse_matching(const Problem& problem, std::string_view json_text) {
  const json j = parse_json(json_text);
  Matching m;
  m.assignment.assign(problem.num_students(), kSelf);
  std::vector<std::string> issues;
  try {
    const json& a = j.at("assignment");
    for (int i = 0; i < problem.num_students(); ++i) {
      const std::string& id = problem.students[i];
      if (!a.contains(id)) {
        issues.push_back("assignment missing for student '" + id + "'");
        continue;
      }
      const json& v = a.at(id);
      if (v.is_null()) continue;
      const int s = index_in(problem.schools, v.get<std::string>());
      if (s < 0) {
        issues.push_back("unknown school '" + v.get<std::string>() + "'");
      } else {
        m.assignment[i] = s;
      }
    }
    for (const auto& [id, v] : a.items()) {
      if (index_in(problem.students, id) < 0) {
        issues.push_back("assignment for unknown student '" + id + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInput,
                std::string("malformed matching: ") + e.what());
  }
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
  check_matching(problem, m);
  return m;
}

std::string serialize_matching(const Problem& problem, const Matching& m) {
  json a = json::object();
  for (int i = 0; i < problem.num_students(); ++i) {
    if (m[i] == kSelf) {
      a[problem.students[i]] = nullptr;
    } else {
      a[problem.students[i]] = problem.schools[m[i]];
    }
  }
  json j;
  j["assignment"] = a;
  return j.dump();
}

void check_matching(const Problem& problem, const Matching& m) {
  std::vector<std::string> issues;
  if (static_cast<int>(m.assignment.size()) != problem.num_students()) {
    throw Error(ErrorKind::kInput, "matching size differs from student count");
  }
  std::vector<int> load(problem.num_schools(), 0);
  for (SchoolIndex s : m.assignment) {
    if (s == kSelf) continue;
    if (s < 0 || s >= problem.num_schools()) {
      throw Error(ErrorKind::kInput, "matching references unknown school");
    }
    ++load[s];
  }
  for (int s = 0; s < problem.num_schools(); ++s) {
    if (load[s] > problem.quotas()[s]) {
      issues.push_back("school '" + problem.schools[s] + "' over quota");
    }
  }
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
}

}  // namespace tiermatch
