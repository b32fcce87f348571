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

#include "tiermatch/bayes.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "parallel.hpp"
#include "tiermatch/scenario.hpp"

namespace tiermatch {
namespace {

using json = nlohmann::ordered_json;
using UtilityTable = std::vector<Rational>;  // schools, then self

Rational rational_from_json(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<int64_t>());
  } catch (const Error&) {
  }
  throw Error(ErrorKind::kInput, where + ": expected a rational like \"1/5\"");
}

UtilityTable utility_from_json(const json& j, const std::vector<std::string>& schools,
                               const std::string& owner) {
  std::vector<std::string> issues;
  UtilityTable table(schools.size() + 1);
  std::vector<bool> seen(schools.size() + 1, false);
  for (const auto& [key, value] : j.items()) {
    size_t slot = schools.size();
    if (key != "self") {
      auto it = std::find(schools.begin(), schools.end(), key);
      if (it == schools.end()) {
        issues.push_back(owner + ": utility for unknown school '" + key + "'");
        continue;
      }
      slot = static_cast<size_t>(it - schools.begin());
    }
    table[slot] = rational_from_json(value, owner + " utility of '" + key + "'");
    seen[slot] = true;
  }
  for (size_t s = 0; s < seen.size(); ++s) {
    if (!seen[s]) {
      issues.push_back(owner + ": utility missing for '" +
                       (s < schools.size() ? schools[s] : "self") + "'");
    }
  }
  if (issues.empty()) {
    std::set<Rational> distinct(table.begin(), table.end());
    if (distinct.size() != table.size()) {
      issues.push_back(owner + ": utilities must be pairwise distinct");
    }
  }
  if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));
  return table;
}

Preference preference_from_utility(const UtilityTable& u) {
  const int m = static_cast<int>(u.size()) - 1;
  std::vector<SchoolIndex> order(m);
  for (int s = 0; s < m; ++s) order[s] = s;
  std::sort(order.begin(), order.end(),
            [&](SchoolIndex a, SchoolIndex b) { return u[a] > u[b]; });
  Preference p;
  for (SchoolIndex s : order) {
    (u[s] > u[m] ? p.acceptable : p.unacceptable).push_back(s);
  }
  return p;
}

RawPreference raw_from(const Preference& p,
                       const std::vector<std::string>& schools) {
  RawPreference raw;
  for (SchoolIndex s : p.acceptable) raw.acceptable.push_back(schools[s]);
  raw.unacceptable.emplace();
  for (SchoolIndex s : p.unacceptable) raw.unacceptable->push_back(schools[s]);
  return raw;
}

std::map<std::string, UtilityTable> utilities_from_json(
    const json& j, const std::vector<std::string>& students,
    const std::vector<std::string>& schools) {
  std::map<std::string, UtilityTable> out;
  for (const auto& [id, table] : j.items()) {
    if (std::find(students.begin(), students.end(), id) == students.end()) {
      throw Error(ErrorKind::kInput, "utilities given for unknown student '" +
                                         id + "'");
    }
    out[id] = utility_from_json(table, schools, "student '" + id + "'");
  }
  return out;
}

PriorityStructure state_structure(const BayesianProblem& bp, int k) {
  PriorityStructure ps = bp.base.structure;
  ps.priorities = bp.states[k].priorities;
  return ps;
}

// Strategic players: every untyped student, plus one player per type of the
// typed student, in student order.
struct Player {
  StudentIndex student;
  int type;  // -1 when the player acts in every state
};

std::vector<Player> players_of(const BayesianProblem& bp) {
  std::vector<Player> out;
  for (StudentIndex i = 0; i < bp.base.num_students(); ++i) {
    if (bp.typed_student == i) {
      for (int k = 0; k < static_cast<int>(bp.states.size()); ++k) {
        out.push_back({i, k});
      }
    } else {
      out.push_back({i, -1});
    }
  }
  return out;
}

Rational utility_of(const BayesState& state, StudentIndex i, SchoolIndex s) {
  const auto& u = state.utilities[i];
  return s == kSelf ? u.back() : u[s];
}

}  // namespace

std::string format_rational(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& text) {
  const auto bad = [&] {
    return Error(ErrorKind::kInput, "malformed rational '" + text + "'");
  };
  const size_t slash = text.find('/');
  try {
    size_t used = 0;
    const std::string num_text = text.substr(0, slash);
    const long long num = std::stoll(num_text, &used);
    if (used != num_text.size()) throw bad();
    long long den = 1;
    if (slash != std::string::npos) {
      const std::string den_text = text.substr(slash + 1);
      den = std::stoll(den_text, &used);
      if (used != den_text.size()) throw bad();
    }
    if (den == 0) throw bad();
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw bad();
  }
}

bool is_bayesian_json(std::string_view json_text) {
  try {
    const json j = json::parse(json_text);
    return j.is_object() &&
           (j.contains("states") || j.contains("private_types"));
  } catch (const json::exception&) {
    return false;
  }
}

BayesianProblem load_bayesian_problem(std::string_view json_text) {
  RawProblem raw = parse_scenario(json_text);
  const json j = json::parse(json_text);
  const bool has_states = j.contains("states");
  const bool has_types = j.contains("private_types");
  if (has_states == has_types) {
    throw Error(ErrorKind::kInput,
                "a Bayesian scenario needs exactly one of \"states\" and "
                "\"private_types\"");
  }

  BayesianProblem bp;
  try {
    const auto common =
        j.contains("utilities")
            ? utilities_from_json(j.at("utilities"), raw.students, raw.schools)
            : std::map<std::string, UtilityTable>{};

    struct PendingState {
      Rational prob;
      std::map<std::string, std::vector<std::string>> priorities;
      std::map<std::string, UtilityTable> utilities;
    };
    std::vector<PendingState> pending;
    if (has_states) {
      for (const auto& s : j.at("states")) {
        PendingState ps;
        ps.prob = rational_from_json(s.at("prob"), "state probability");
        if (s.contains("priorities")) {
          for (const auto& [id, pr] : s.at("priorities").items()) {
            ps.priorities[id] = pr.get<std::vector<std::string>>();
          }
        }
        ps.utilities = common;
        if (s.contains("utilities")) {
          for (auto& [id, u] :
               utilities_from_json(s.at("utilities"), raw.students,
                                   raw.schools)) {
            ps.utilities[id] = u;
          }
        }
        pending.push_back(std::move(ps));
      }
    } else {
      const json& pt = j.at("private_types");
      const std::string who = pt.at("student").get<std::string>();
      auto it = std::find(raw.students.begin(), raw.students.end(), who);
      if (it == raw.students.end()) {
        throw Error(ErrorKind::kInput,
                    "private type for unknown student '" + who + "'");
      }
      bp.typed_student = static_cast<StudentIndex>(it - raw.students.begin());
      for (const auto& t : pt.at("types")) {
        PendingState ps;
        ps.prob = rational_from_json(t.at("prob"), "type probability");
        ps.utilities = common;
        ps.utilities[who] =
            utility_from_json(t.at("utilities"), raw.schools,
                              "type of student '" + who + "'");
        pending.push_back(std::move(ps));
      }
    }

    std::vector<std::string> issues;
    if (pending.empty()) issues.push_back("no states given");
    Rational total(0);
    for (const auto& ps : pending) {
      if (ps.prob <= Rational(0) || ps.prob > Rational(1)) {
        issues.push_back("state probability " + format_rational(ps.prob) +
                         " outside (0,1]");
      }
      total += ps.prob;
      for (const auto& id : raw.students) {
        if (!ps.utilities.contains(id)) {
          issues.push_back("utilities missing for student '" + id + "'");
        }
      }
    }
    if (!pending.empty() && total != Rational(1)) {
      issues.push_back("state probabilities sum to " + format_rational(total));
    }
    if (!issues.empty()) throw Error(ErrorKind::kInput, std::move(issues));

    raw.preferences.clear();
    for (const auto& id : raw.students) {
      raw.preferences[id] = raw_from(
          preference_from_utility(pending[0].utilities.at(id)), raw.schools);
    }
    bp.base = validate_problem(raw);

    const int n = bp.base.num_students();
    for (const auto& ps : pending) {
      BayesState state;
      state.probability = ps.prob;
      state.priorities = bp.base.structure.priorities;
      for (const auto& [id, ranking] : ps.priorities) {
        const SchoolIndex s = bp.base.school_index(id);
        std::vector<StudentIndex> order;
        for (const auto& sid : ranking) {
          order.push_back(bp.base.student_index(sid));
        }
        if (static_cast<int>(order.size()) != n) {
          throw Error(ErrorKind::kInput,
                      "priority not a permutation for school '" + id + "'");
        }
        state.priorities[s] = PriorityOrder(order);
      }
      for (StudentIndex i = 0; i < n; ++i) {
        state.utilities.push_back(ps.utilities.at(bp.base.students[i]));
        state.preferences.push_back(
            preference_from_utility(state.utilities.back()));
      }
      bp.states.push_back(std::move(state));
    }
    for (StudentIndex i = 0; i < n; ++i) {
      if (bp.typed_student == i) continue;
      for (const auto& state : bp.states) {
        if (state.preferences[i] != bp.states[0].preferences[i]) {
          throw Error(ErrorKind::kInput,
                      "student '" + bp.base.students[i] +
                          "' has different ordinal preferences across states");
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kInput,
                std::string("malformed Bayesian scenario: ") + e.what());
  }
  return bp;
}

Profile state_reports(const BayesianProblem& bp, const BayesProfile& profile,
                      int state) {
  Profile out = profile.reports;
  if (bp.typed_student) {
    out[*bp.typed_student] = profile.type_reports.at(state);
  }
  return out;
}

BayesProfile truthful_profile(const BayesianProblem& bp) {
  BayesProfile out;
  out.reports = bp.states[0].preferences;
  if (bp.typed_student) {
    for (const auto& state : bp.states) {
      out.type_reports.push_back(state.preferences[*bp.typed_student]);
    }
  }
  return out;
}

std::vector<Matching> bayes_outcomes(const BayesianProblem& bp,
                                     Mechanism mech,
                                     const BayesProfile& profile) {
  std::vector<Matching> out;
  for (int k = 0; k < static_cast<int>(bp.states.size()); ++k) {
    out.push_back(run_mechanism(mech, state_structure(bp, k), bp.base.tiers,
                                state_reports(bp, profile, k)));
  }
  return out;
}

Rational expected_utility(const BayesianProblem& bp, Mechanism mech,
                          const BayesProfile& profile, StudentIndex student) {
  const std::vector<Matching> outcomes = bayes_outcomes(bp, mech, profile);
  Rational total(0);
  for (size_t k = 0; k < bp.states.size(); ++k) {
    total += bp.states[k].probability *
             utility_of(bp.states[k], student, outcomes[k][student]);
  }
  return total;
}

bool is_bayes_nash(const BayesianProblem& bp, Mechanism mech,
                   const BayesProfile& profile, const Limits& limits) {
  const StrategySpace space(bp.base.schools, limits.max_strategy_schools);
  const auto current = bayes_outcomes(bp, mech, profile);
  for (const Player& player : players_of(bp)) {
    const StudentIndex i = player.student;
    for (int s = 0; s < space.size(); ++s) {
      BayesProfile trial = profile;
      if (player.type >= 0) {
        trial.type_reports[player.type] = space[s];
        const int k = player.type;
        const SchoolIndex got =
            run_mechanism(mech, state_structure(bp, k), bp.base.tiers,
                          state_reports(bp, trial, k))[i];
        if (utility_of(bp.states[k], i, got) >
            utility_of(bp.states[k], i, current[k][i])) {
          return false;
        }
      } else {
        trial.reports[i] = space[s];
        if (expected_utility(bp, mech, trial, i) >
            expected_utility(bp, mech, profile, i)) {
          return false;
        }
      }
    }
  }
  return true;
}

BneReport enumerate_bne_outcomes(const BayesianProblem& bp, Mechanism mech,
                                 const Limits& limits) {
  const StrategySpace space(bp.base.schools, limits.max_strategy_schools);
  const int num_states = static_cast<int>(bp.states.size());
  const int n = bp.base.num_students();
  const int k_strategies = space.size();
  std::vector<OutcomeTable> tables;
  tables.reserve(num_states);
  for (int k = 0; k < num_states; ++k) {
    tables.emplace_back(state_structure(bp, k), bp.base.tiers, mech, space,
                        limits);
  }
  const std::vector<Player> players = players_of(bp);
  const int num_players = static_cast<int>(players.size());
  const int64_t joint = checked_profile_count(k_strategies, num_players,
                                              limits.profile_guard);
  std::vector<int64_t> player_stride(num_players, 1);
  for (int p = num_players - 2; p >= 0; --p) {
    player_stride[p] = player_stride[p + 1] * k_strategies;
  }
  // player_for[k][i]: the player choosing student i's report in state k.
  std::vector<std::vector<int>> player_for(num_states, std::vector<int>(n));
  for (int p = 0; p < num_players; ++p) {
    for (int k = 0; k < num_states; ++k) {
      if (players[p].type < 0 || players[p].type == k) {
        player_for[k][players[p].student] = p;
      }
    }
  }

  auto state_index = [&](const std::vector<int>& digits, int k) {
    int64_t idx = 0;
    for (StudentIndex i = 0; i < n; ++i) {
      idx += tables[k].stride(i) * digits[player_for[k][i]];
    }
    return idx;
  };
  // Value a player compares across its own deviations.
  auto value = [&](const Player& pl, const std::vector<int64_t>& idx) {
    Rational v(0);
    for (int k = 0; k < num_states; ++k) {
      if (pl.type >= 0 && pl.type != k) continue;
      const SchoolIndex s = tables[k].assignment(idx[k], pl.student);
      const Rational u = utility_of(bp.states[k], pl.student, s);
      v += pl.type >= 0 ? u : bp.states[k].probability * u;
    }
    return v;
  };

  const int64_t workers = std::clamp<int64_t>(limits.jobs, 1, joint);
  const int64_t chunk = (joint + workers - 1) / workers;
  std::vector<std::vector<int64_t>> found(workers);
  internal::parallel_for(workers, static_cast<int>(workers),
                         [&](int64_t wb, int64_t we) {
    std::vector<int> digits(num_players);
    std::vector<int64_t> idx(num_states), trial(num_states);
    for (int64_t w = wb; w < we; ++w) {
      const int64_t end = std::min(joint, (w + 1) * chunk);
      for (int64_t jp = w * chunk; jp < end; ++jp) {
        for (int p = 0; p < num_players; ++p) {
          digits[p] = static_cast<int>((jp / player_stride[p]) % k_strategies);
        }
        for (int k = 0; k < num_states; ++k) idx[k] = state_index(digits, k);
        bool equilibrium = true;
        for (int p = 0; p < num_players && equilibrium; ++p) {
          const Player& pl = players[p];
          const Rational now = value(pl, idx);
          for (int s = 0; s < k_strategies && equilibrium; ++s) {
            if (s == digits[p]) continue;
            for (int k = 0; k < num_states; ++k) {
              trial[k] = idx[k];
              if (player_for[k][pl.student] == p) {
                trial[k] += tables[k].stride(pl.student) * (s - digits[p]);
              }
            }
            if (value(pl, trial) > now) equilibrium = false;
          }
        }
        if (equilibrium) found[w].push_back(jp);
      }
    }
  });

  BneReport report;
  report.mechanism = mech;
  for (const auto& part : found) {
    for (int64_t jp : part) {
      BayesProfile profile;
      profile.reports.assign(n, Preference{});
      std::vector<int> digits(num_players);
      for (int p = 0; p < num_players; ++p) {
        digits[p] = static_cast<int>((jp / player_stride[p]) % k_strategies);
        const Player& pl = players[p];
        if (pl.type >= 0) {
          profile.type_reports.push_back(space[digits[p]]);
        } else {
          profile.reports[pl.student] = space[digits[p]];
        }
      }
      if (bp.typed_student) {
        profile.reports[*bp.typed_student] = profile.type_reports[0];
      }
      std::vector<Matching> tuple;
      for (int k = 0; k < num_states; ++k) {
        tuple.push_back(tables[k].matching(state_index(digits, k)));
      }
      report.equilibria.push_back(std::move(profile));
      report.outcome_tuples.push_back(std::move(tuple));
    }
  }
  std::sort(report.outcome_tuples.begin(), report.outcome_tuples.end());
  report.outcome_tuples.erase(
      std::unique(report.outcome_tuples.begin(), report.outcome_tuples.end()),
      report.outcome_tuples.end());
  return report;
}

}  // namespace tiermatch
