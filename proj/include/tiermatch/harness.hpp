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

// Verification drivers: the randomized theorem sweep, the whole-domain
// guarantee audit and the replay of every built-in worked example.

#ifndef TIERMATCH_HARNESS_HPP_
#define TIERMATCH_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tiermatch/analysis.hpp"
#include "tiermatch/game.hpp"
#include "tiermatch/types.hpp"

namespace tiermatch {

// Deterministic across platforms: bounded draws use rejection sampling on
// the raw 64-bit engine output.
class Sampler {
 public:
  explicit Sampler(uint64_t seed) : engine_(seed) {}
  // Uniform in [0, n); n must be positive.
  uint64_t below(uint64_t n);
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t k = v.size(); k > 1; --k) {
      std::swap(v[k - 1], v[below(k)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Every tier structure over `num_schools` schools (ordered set partitions).
std::vector<TierStructure> all_tier_structures(int num_schools);

std::vector<std::string> default_student_ids(int n);
std::vector<std::string> default_school_ids(int m);

struct CheckTally {
  std::string name;
  int64_t passed = 0;
  int64_t failed = 0;
  int64_t skipped = 0;
};

struct Failure {
  int trial = 0;
  std::string check;
  std::string detail_json;  // counterexample dump
};

struct TheoremOptions {
  uint64_t seed = 42;
  int trials = 200;
  int students = 3;
  int schools = 3;
  bool probe = false;
  Limits limits;
};

struct TheoremReport {
  TheoremOptions options;
  std::vector<CheckTally> tallies;
  std::vector<Failure> failures;
  // Probe mode only: tier re-rankings that changed the outcome set.
  std::vector<std::string> probe_findings;
  int64_t probe_trials = 0;

  bool ok() const { return failures.empty(); }
};

TheoremReport verify_theorems(const TheoremOptions& options);

struct AuditViolation {
  Profile truth;
  Profile equilibrium;
  Matching outcome;
  Matching sosm;
  SchoolIndex school = 0;
  Verdict verdict = Verdict::kWorse;
};

struct AuditResult {
  int64_t true_profiles = 0;
  int64_t equilibria_checked = 0;
  int64_t worse = 0;
  int64_t incomparable = 0;
  std::optional<AuditViolation> first;

  bool passed() const { return worse == 0 && incomparable == 0; }
};

// Every canonical true profile over `base`'s students and schools; priorities
// and quotas come from `base`. With `complete_only`, true profiles in which
// some student finds a school unacceptable are skipped (reports still range
// over the full strategy space). Throws Error(kGuard) beyond the audit bound.
AuditResult guarantee_audit(const Problem& base, const TierStructure& tiers,
                            std::span<const SchoolIndex> protected_schools,
                            const Limits& limits = {},
                            bool complete_only = false);

struct NamedCheck {
  std::string group;
  std::string name;
  bool passed = false;
  std::string expected;
  std::string actual;
};

// Worked examples with complete information.
std::vector<NamedCheck> replay_examples(const Limits& limits = {});

// Bayesian fixtures; `only` restricts to one fixture name.
std::vector<NamedCheck> verify_bayes_fixtures(
    const Limits& limits = {}, const std::string& only = "");

}  // namespace tiermatch

#endif  // TIERMATCH_HARNESS_HPP_
