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

// Finite-state incomplete-information versions of the revelation game:
// either a common lottery over priority profiles, or one student with a
// private type. Probabilities and utilities are exact rationals.

#ifndef TIERMATCH_BAYES_HPP_
#define TIERMATCH_BAYES_HPP_

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tiermatch/game.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/types.hpp"

namespace tiermatch {

using Rational = boost::rational<int64_t>;

// Always "p/q", including integers ("3/1").
std::string format_rational(const Rational& r);
// Accepts "p/q", "p" or a JSON-style integer string.
Rational parse_rational(const std::string& text);

struct BayesState {
  Rational probability;
  std::vector<PriorityOrder> priorities;  // fully resolved, one per school
  // utilities[i][s] for schools, utilities[i].back() for being unmatched.
  std::vector<std::vector<Rational>> utilities;
  Profile preferences;  // ordinal content of `utilities`
};

struct BayesianProblem {
  // Students, schools, quotas, tiers; priorities and preferences of state 0.
  Problem base;
  std::vector<BayesState> states;
  // With a private type, state k is the student's k-th type.
  std::optional<StudentIndex> typed_student;
};

BayesianProblem load_bayesian_problem(std::string_view json_text);
bool is_bayesian_json(std::string_view json_text);

// One report per student; the typed student (if any) reports one preference
// per type in `type_reports` and its entry in `reports` is ignored.
struct BayesProfile {
  Profile reports;
  std::vector<Preference> type_reports;

  friend bool operator==(const BayesProfile&, const BayesProfile&) = default;
};

// Reports used in state k.
Profile state_reports(const BayesianProblem& bp, const BayesProfile& profile,
                      int state);

BayesProfile truthful_profile(const BayesianProblem& bp);

// Per-state outcomes of a profile.
std::vector<Matching> bayes_outcomes(const BayesianProblem& bp,
                                     Mechanism mech,
                                     const BayesProfile& profile);

// Ex-ante expected utility: sum over states of probability times utility.
Rational expected_utility(const BayesianProblem& bp, Mechanism mech,
                          const BayesProfile& profile, StudentIndex student);

bool is_bayes_nash(const BayesianProblem& bp, Mechanism mech,
                   const BayesProfile& profile, const Limits& limits = {});

struct BneReport {
  Mechanism mechanism = Mechanism::kTda;
  std::vector<BayesProfile> equilibria;
  // Distinct per-state outcome tuples, sorted.
  std::vector<std::vector<Matching>> outcome_tuples;
};

BneReport enumerate_bne_outcomes(const BayesianProblem& bp, Mechanism mech,
                                 const Limits& limits = {});

}  // namespace tiermatch

#endif  // TIERMATCH_BAYES_HPP_
