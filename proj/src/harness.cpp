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

#include "tiermatch/harness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "parallel.hpp"
#include "tiermatch/bayes.hpp"
#include "tiermatch/fixtures.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/scenario.hpp"

namespace tiermatch {
namespace {

using json = nlohmann::ordered_json;

std::vector<int> tier_vector(const TierStructure& t) { return t.labels(); }

std::vector<Matching> outcomes_of(const OutcomeTable& table,
                                  std::span<const int64_t> indices) {
  std::vector<Matching> out;
  for (int64_t p : indices) out.push_back(table.matching(p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<bool> flags_of(const OutcomeTable& table,
                           std::span<const int64_t> indices) {
  std::vector<bool> out(table.size(), false);
  for (int64_t p : indices) out[p] = true;
  return out;
}

int64_t with_digit(const OutcomeTable& table, int64_t p, StudentIndex i,
                   int strategy) {
  return p + table.stride(i) * (strategy - table.strategy_of(p, i));
}

json matchings_json(const Problem& problem, std::span<const Matching> ms) {
  json out = json::array();
  for (const Matching& m : ms) out.push_back(format_matching(problem, m));
  return out;
}

json profile_json(const Problem& problem, const Profile& profile) {
  json out = json::object();
  for (int i = 0; i < problem.num_students(); ++i) {
    out[problem.students[i]] = format_preference(problem, profile[i]);
  }
  return out;
}

// Ordered tally registry.
class Tallies {
 public:
  CheckTally& operator[](const std::string& name) {
    for (auto& t : tallies_) {
      if (t.name == name) return t;
    }
    tallies_.push_back({name, 0, 0, 0});
    return tallies_.back();
  }
  std::vector<CheckTally> take() { return std::move(tallies_); }

 private:
  std::vector<CheckTally> tallies_;
};

}  // namespace

uint64_t Sampler::below(uint64_t n) {
  if (n == 0) throw Error(ErrorKind::kPrecondition, "empty sampling range");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::vector<TierStructure> all_tier_structures(int num_schools) {
  std::vector<TierStructure> out;
  std::vector<int> labels(num_schools, 1);
  while (true) {
    const int top = num_schools == 0
                        ? 0
                        : *std::max_element(labels.begin(), labels.end());
    std::vector<bool> used(top + 1, false);
    for (int l : labels) used[l] = true;
    bool onto = true;
    for (int k = 1; k <= top; ++k) onto = onto && used[k];
    if (onto) out.emplace_back(labels);
    int pos = num_schools - 1;
    while (pos >= 0 && labels[pos] == num_schools) labels[pos--] = 1;
    if (pos < 0) break;
    ++labels[pos];
  }
  return out;
}

std::vector<std::string> default_student_ids(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> default_school_ids(int m) {
  std::vector<std::string> out;
  for (int s = 0; s < m; ++s) {
    out.push_back(s < 26 ? std::string(1, static_cast<char>('a' + s))
                         : "s" + std::to_string(s));
  }
  return out;
}

TheoremReport verify_theorems(const TheoremOptions& options) {
  if (options.trials < 0 || options.students < 1 || options.schools < 1) {
    throw Error(ErrorKind::kInput,
                "trials must be non-negative and sizes positive");
  }
  if (options.students * options.schools > options.limits.stable_cells) {
    throw Error(ErrorKind::kGuard,
                "stable set enumeration needs students*schools <= " +
                    std::to_string(options.limits.stable_cells));
  }
  const Limits& limits = options.limits;
  const int n = options.students;
  const int m = options.schools;
  TheoremReport report;
  report.options = options;
  Tallies tallies;
  Sampler rng(options.seed);

  Problem problem;
  problem.students = default_student_ids(n);
  problem.schools = default_school_ids(m);
  const StrategySpace space(problem.schools, limits.max_strategy_schools);
  checked_profile_count(space.size(), n, limits.profile_guard);
  const std::vector<TierStructure> structures = all_tier_structures(m);
  const int K = space.size();
  static constexpr int kQuotaChoices[] = {0, 1, 1, 1, 2};

  for (int trial = 0; trial < options.trials; ++trial) {
    PriorityStructure ps;
    ps.num_students = n;
    for (int s = 0; s < m; ++s) {
      ps.quotas.push_back(kQuotaChoices[rng.below(5)]);
      std::vector<StudentIndex> ranking(n);
      std::iota(ranking.begin(), ranking.end(), 0);
      rng.shuffle(ranking);
      ps.priorities.emplace_back(ranking);
    }
    Profile truth;
    std::vector<int> truth_idx;
    for (int i = 0; i < n; ++i) {
      truth_idx.push_back(static_cast<int>(rng.below(K)));
      truth.push_back(space[truth_idx.back()]);
    }
    const TierStructure& coarse = structures[rng.below(structures.size())];
    std::vector<TierStructure> refinements;
    for (const auto& t : structures) {
      if (is_refinement(t, coarse)) refinements.push_back(t);
    }
    const TierStructure& fine = refinements[rng.below(refinements.size())];
    const TierStructure& other = structures[rng.below(structures.size())];

    problem.structure = ps;
    problem.tiers = fine;
    problem.preferences = truth;

    auto fail = [&](const std::string& check, json detail) {
      tallies[check].failed++;
      json dump;
      dump["trial"] = trial;
      dump["check"] = check;
      dump["scenario"] = json::parse(save_problem(problem));
      dump["t"] = tier_vector(fine);
      dump["t_coarse"] = tier_vector(coarse);
      dump["t_other"] = tier_vector(other);
      dump["detail"] = std::move(detail);
      report.failures.push_back({trial, check, dump.dump()});
    };
    auto pass = [&](const std::string& check) { tallies[check].passed++; };
    auto skip = [&](const std::string& check) { tallies[check].skipped++; };
    auto record = [&](const std::string& check, bool ok, json detail) {
      if (ok) {
        pass(check);
      } else {
        fail(check, std::move(detail));
      }
    };

    const OutcomeTable tda(ps, fine, Mechanism::kTda, space, limits);
    const OutcomeTable tda_coarse(ps, coarse, Mechanism::kTda, space, limits);
    const OutcomeTable tda_other(ps, other, Mechanism::kTda, space, limits);
    const OutcomeTable da(ps, fine, Mechanism::kDa, space, limits);
    const int64_t truthful = tda.encode(truth_idx);

    const std::vector<Matching> stable =
        stable_set(ps, truth, limits.stable_cells);
    const auto ne = nash_profile_indices(tda, truth, limits.jobs);
    const auto ne_coarse = nash_profile_indices(tda_coarse, truth, limits.jobs);
    const auto ne_other = nash_profile_indices(tda_other, truth, limits.jobs);
    const auto ne_da = nash_profile_indices(da, truth, limits.jobs);
    const auto o_fine = outcomes_of(tda, ne);
    const auto o_coarse = outcomes_of(tda_coarse, ne_coarse);
    const auto o_other = outcomes_of(tda_other, ne_other);
    const auto o_da = outcomes_of(da, ne_da);
    const auto ne_flags = flags_of(tda, ne);
    const auto ne_coarse_flags = flags_of(tda_coarse, ne_coarse);

    auto sets_detail = [&] {
      json d;
      d["stable"] = matchings_json(problem, stable);
      d["ne_t"] = matchings_json(problem, o_fine);
      d["ne_t_coarse"] = matchings_json(problem, o_coarse);
      return d;
    };

    // Stable set inside the fine NE outcomes inside the coarse ones.
    record("nested-inclusion",
           std::includes(o_fine.begin(), o_fine.end(), stable.begin(),
                         stable.end()) &&
               std::includes(o_coarse.begin(), o_coarse.end(),
                             o_fine.begin(), o_fine.end()),
           sets_detail());
    record("da-outcomes-contain-stable",
           std::includes(o_da.begin(), o_da.end(), stable.begin(),
                         stable.end()),
           sets_detail());

    // Listing only the assigned school supports each stable matching.
    {
      bool ok = true;
      json bad = json::array();
      for (const Matching& mu : stable) {
        std::vector<int> digits(n);
        for (int i = 0; i < n; ++i) {
          digits[i] = space.index_of(make_preference(
              mu[i] == kSelf ? std::vector<SchoolIndex>{}
                             : std::vector<SchoolIndex>{mu[i]},
              problem.schools));
        }
        const int64_t p = tda.encode(digits);
        if (!ne_flags[p] || tda.matching(p) != mu) {
          ok = false;
          bad.push_back(format_matching(problem, mu));
        }
      }
      record("stable-singleton-equilibrium", ok, {{"unsupported", bad}});
    }

    // Within-tier acyclicity versus the construction for cyclic tiers.
    const bool acyclic = is_within_tier_acyclic(ps, fine);
    if (acyclic) {
      record("acyclic-equals-stable", o_fine == stable, sets_detail());
      skip("cycle-construction");
    } else {
      skip("acyclic-equals-stable");
      const std::vector<Cycle> cycles = find_within_tier_cycles(ps, fine);
      const Cycle& c = cycles.front();
      json d;
      d["cycle"] = {problem.schools[c.school_a], problem.schools[c.school_b],
                    problem.students[c.i], problem.students[c.j],
                    problem.students[c.k]};
      try {
        construct_cycle_counterexample(problem, fine, c, limits);
        pass("cycle-construction");
      } catch (const std::logic_error& e) {
        d["error"] = e.what();
        fail("cycle-construction", d);
      }
    }
    if (acyclic && is_within_tier_acyclic(ps, other)) {
      record("relabel-invariance", o_fine == stable && o_other == stable,
             {{"ne_t_other", matchings_json(problem, o_other)},
              {"stable", matchings_json(problem, stable)}});
    } else {
      skip("relabel-invariance");
    }

    // Reshuffle map on strategy indices for the fine structure.
    std::vector<int> shuffled(K);
    for (int s = 0; s < K; ++s) {
      shuffled[s] = space.index_of(reshuffle(space[s], fine, problem.schools));
    }
    auto reshuffled_index = [&](int64_t p) {
      std::vector<int> digits = tda.decode(p);
      for (int& d : digits) d = shuffled[d];
      return tda.encode(digits);
    };

    {
      int64_t bad = -1;
      for (int64_t p = 0; p < tda.size() && bad < 0; ++p) {
        const int64_t q = reshuffled_index(p);
        const Matching m0 = tda.matching(p);
        if (m0 != tda.matching(q) || m0 != da.matching(q)) bad = p;
      }
      record("reshuffle-equivalence", bad < 0,
             bad < 0 ? json{}
                     : json{{"profile", profile_json(problem, tda.profile(bad))}});
    }
    {
      int64_t bad = -1;
      for (int64_t p : ne) {
        if (!ne_coarse_flags[reshuffled_index(p)]) {
          bad = p;
          break;
        }
      }
      record("reshuffled-equilibria-coarse", bad < 0,
             bad < 0 ? json{}
                     : json{{"equilibrium",
                             profile_json(problem, tda.profile(bad))}});
    }
    {
      int64_t bad = -1;
      for (int64_t p : ne) {
        const int64_t q = reshuffled_index(p);
        for (int i = 0; i < n && bad < 0; ++i) {
          if (da.assignment(q, i) !=
              da.assignment(with_digit(da, q, i, truth_idx[i]), i)) {
            bad = p;
          }
        }
        if (bad >= 0) break;
      }
      record("truthful-response-at-equilibrium", bad < 0,
             bad < 0 ? json{}
                     : json{{"equilibrium",
                             profile_json(problem, tda.profile(bad))}});
    }

    // TDA at truth is stable relative to its tier structure.
    for (const auto* t : {&fine, &coarse, &other}) {
      const Matching mu = run_mechanism(Mechanism::kTda, ps, *t, truth);
      record("tier-stability", is_stable_wrt_tiers(ps, *t, mu, truth),
             {{"tiers", tier_vector(*t)},
              {"matching", format_matching(problem, mu)}});
    }

    // Within-tier reordering by true preference never hurts.
    {
      bool ok = true;
      json d;
      const auto ranks = [&](int i, SchoolIndex s) { return truth[i].rank(s); };
      for (int i = 0; i < n && ok; ++i) {
        for (int s = 0; s < K && ok; ++s) {
          const int star = space.index_of(
              within_tier_consistent(space[s], truth[i], fine));
          if (star == s) continue;
          for (int64_t p = 0; p < tda.size() && ok; ++p) {
            if (tda.strategy_of(p, i) != s) continue;
            const int64_t q = with_digit(tda, p, i, star);
            if (ranks(i, tda.assignment(q, i)) >
                ranks(i, tda.assignment(p, i))) {
              ok = false;
              d = {{"student", problem.students[i]},
                   {"report", format_preference(problem, space[s])},
                   {"consistent", format_preference(problem, space[star])},
                   {"profile", profile_json(problem, tda.profile(p))}};
            }
          }
        }
      }
      record("within-tier-consistency", ok, d);
    }

    // Undominated DA equilibria select the SOSM only.
    {
      const DominanceTable dom(da, truth);
      std::vector<int64_t> kept;
      for (int64_t p : ne_da) {
        bool undominated = true;
        for (int i = 0; i < n && undominated; ++i) {
          undominated = !dom.dominated(i, da.strategy_of(p, i));
        }
        if (undominated) kept.push_back(p);
      }
      const std::vector<Matching> got = outcomes_of(da, kept);
      const Matching sosm_mu = da.matching(truthful);
      record("da-undominated-is-sosm",
             got.size() == 1 && got.front() == sosm_mu,
             {{"undominated", matchings_json(problem, got)},
              {"sosm", format_matching(problem, sosm_mu)}});
    }

    // DA equilibrium outcomes are individually rational and non-wasteful.
    {
      bool ok = true;
      for (const Matching& mu : o_da) {
        const StabilityReport r = find_blocking_pairs(ps, mu, truth);
        if (!r.ir_violations.empty()) ok = false;
        for (const auto& bp : r.blocking_pairs) {
          if (bp.kind == BlockKind::kWasteful) ok = false;
        }
      }
      record("da-equilibria-ir-nonwasteful", ok,
             {{"ne_da", matchings_json(problem, o_da)}});
    }

    // No equilibrium blocking pair targets a cycle-free tier.
    {
      bool ok = true;
      json d;
      for (int k = 1; k <= fine.count(); ++k) {
        if (!find_cycles(ps, fine.schools_in(k)).empty()) continue;
        for (const Matching& mu : o_fine) {
          for (const auto& bp : find_blocking_pairs(ps, mu, truth)
                                    .blocking_pairs) {
            if (fine.tier_of(bp.school) == k && ok) {
              ok = false;
              d = {{"matching", format_matching(problem, mu)},
                   {"student", problem.students[bp.student]},
                   {"school", problem.schools[bp.school]}};
            }
          }
        }
      }
      record("acyclic-tier-unblocked", ok, d);
    }

    if (options.probe) {
      // Re-rank the tiers of the fine structure and compare outcome sets.
      std::vector<int> perm(fine.count());
      std::iota(perm.begin(), perm.end(), 1);
      rng.shuffle(perm);
      std::vector<int> labels = fine.labels();
      for (int& l : labels) l = perm[l - 1];
      const TierStructure reranked(labels);
      const OutcomeTable t2(ps, reranked, Mechanism::kTda, space, limits);
      const auto o2 = outcomes_of(t2, nash_profile_indices(t2, truth,
                                                           limits.jobs));
      ++report.probe_trials;
      if (o2 != o_fine) {
        json f;
        f["trial"] = trial;
        f["t"] = tier_vector(fine);
        f["t_reranked"] = labels;
        f["within_tier_acyclic"] = acyclic;
        f["ne_t"] = matchings_json(problem, o_fine);
        f["ne_reranked"] = matchings_json(problem, o2);
        report.probe_findings.push_back(f.dump());
      }
    }
  }
  report.tallies = tallies.take();
  return report;
}

AuditResult guarantee_audit(const Problem& base, const TierStructure& tiers,
                            std::span<const SchoolIndex> protected_schools,
                            const Limits& limits, bool complete_only) {
  for (SchoolIndex s : protected_schools) {
    if (s < 0 || s >= base.num_schools()) {
      throw Error(ErrorKind::kInput, "unknown protected school");
    }
  }
  const StrategySpace space(base.schools, limits.max_strategy_schools);
  const int64_t size = checked_profile_count(
      space.size(), base.num_students(), limits.profile_guard);
  if (size > limits.audit_work_guard / size) {
    throw Error(ErrorKind::kGuard,
                "guarantee audit needs " + std::to_string(size) + "^2 checks, "
                "above the audit bound of " +
                    std::to_string(limits.audit_work_guard));
  }
  const PriorityStructure& ps = base.structure;
  const OutcomeTable tda(ps, tiers, Mechanism::kTda, space, limits);
  const OutcomeTable da(ps, tiers, Mechanism::kDa, space, limits);

  const int64_t workers = std::clamp<int64_t>(limits.jobs, 1, size);
  const int64_t chunk = (size + workers - 1) / workers;
  std::vector<AuditResult> parts(workers);
  internal::parallel_for(workers, static_cast<int>(workers),
                         [&](int64_t wb, int64_t we) {
    for (int64_t w = wb; w < we; ++w) {
      AuditResult& part = parts[w];
      const int64_t end = std::min(size, (w + 1) * chunk);
      for (int64_t r = w * chunk; r < end; ++r) {
        const Profile truth = tda.profile(r);
        if (complete_only &&
            std::any_of(truth.begin(), truth.end(), [](const Preference& x) {
              return !x.unacceptable.empty();
            })) {
          continue;
        }
        const Matching sosm_mu = da.matching(r);
        ++part.true_profiles;
        for (int64_t p : nash_profile_indices(tda, truth, 1)) {
          ++part.equilibria_checked;
          const Matching mu = tda.matching(p);
          for (SchoolIndex s : protected_schools) {
            const Verdict v = responsive_dominates(
                mu.assigned_to(s), sosm_mu.assigned_to(s), ps.quotas[s],
                ps.priorities[s]);
            if (v != Verdict::kWorse && v != Verdict::kIncomparable) continue;
            (v == Verdict::kWorse ? part.worse : part.incomparable)++;
            if (!part.first) {
              part.first =
                  AuditViolation{truth, tda.profile(p), mu, sosm_mu, s, v};
            }
          }
        }
      }
    }
  });
  AuditResult total;
  for (auto& part : parts) {
    total.true_profiles += part.true_profiles;
    total.equilibria_checked += part.equilibria_checked;
    total.worse += part.worse;
    total.incomparable += part.incomparable;
    if (!total.first && part.first) total.first = std::move(part.first);
  }
  return total;
}

namespace {

std::string outcome_set_string(const Problem& p,
                               const std::vector<Matching>& ms) {
  std::vector<std::string> parts;
  for (const auto& m : ms) parts.push_back(format_matching(p, m));
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (size_t k = 0; k < parts.size(); ++k) {
    out += (k ? "; " : "") + parts[k];
  }
  return out + "}";
}

std::string expected_set_string(std::vector<std::string> parts) {
  std::sort(parts.begin(), parts.end());
  std::string out = "{";
  for (size_t k = 0; k < parts.size(); ++k) {
    out += (k ? "; " : "") + parts[k];
  }
  return out + "}";
}

TierStructure tiers_of(std::initializer_list<int> labels) {
  return TierStructure(std::vector<int>(labels));
}

class Checks {
 public:
  explicit Checks(std::string group) : group_(std::move(group)) {}
  void set_group(std::string group) { group_ = std::move(group); }
  void equal(const std::string& name, const std::string& expected,
             const std::string& actual) {
    out_.push_back({group_, name, expected == actual, expected, actual});
  }
  void truth(const std::string& name, bool value,
             const std::string& actual = "") {
    out_.push_back({group_, name, value, "true",
                    actual.empty() ? (value ? "true" : "false") : actual});
  }
  // Runs `body`, turning escaped errors into a failed check.
  template <class Fn>
  void guarded(const std::string& name, Fn&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      out_.push_back({group_, name, false, "no error",
                      std::string("error: ") + e.what()});
    }
  }
  std::vector<NamedCheck> take() { return std::move(out_); }

 private:
  std::string group_;
  std::vector<NamedCheck> out_;
};

std::string deviation_string(const Problem& p,
                             const std::optional<Deviation>& d) {
  if (!d) return "none";
  return "(" + p.students[d->student] + ", " + format_preference(p, d->report) +
         ", " + (d->outcome == kSelf ? "self" : p.schools[d->outcome]) + ")";
}

}  // namespace

std::vector<NamedCheck> replay_examples(const Limits& limits) {
  Checks c("exp1");
  const auto run = [&](const Problem& p, Mechanism mech,
                       const TierStructure& t, const Profile& r) {
    return format_matching(p, run_mechanism(mech, p.structure, t, r));
  };

  c.guarded("exp1", [&] {
    const Problem p = load_fixture("exp1");
    const TierStructure t = p.tiers;
    const TierStructure t_rev = tiers_of({2, 1, 1});
    const Profile& q = p.reports.at("Q");
    c.equal("da-truthful", "((1,c),(2,b),(3,a))",
            run(p, Mechanism::kDa, t, p.preferences));
    c.equal("tda-truthful", "((1,a),(2,b),(3,c))",
            run(p, Mechanism::kTda, t, p.preferences));
    c.equal("tda-at-Q", "((1,c),(2,a),(3,b))", run(p, Mechanism::kTda, t, q));
    c.equal("tda-ne-outcomes",
            expected_set_string({"((1,c),(2,a),(3,b))", "((1,c),(2,b),(3,a))"}),
            outcome_set_string(
                p, enumerate_nash_outcomes(p, t, Mechanism::kTda, limits)
                       .outcomes));
    c.truth("Q-is-nash", is_nash(p, t, Mechanism::kTda, q, limits));
    c.truth("truthful-not-nash",
            !is_nash(p, t, Mechanism::kTda, p.preferences, limits));
    c.equal("manipulation-witness", "(1, (c,b | a), c)",
            deviation_string(p, is_manipulable_at(p, t, Mechanism::kTda,
                                                  limits)));
    c.equal("da-not-manipulable", "none",
            deviation_string(p, is_manipulable_at(p, t, Mechanism::kDa,
                                                  limits)));

    const auto undominated =
        enumerate_undominated_nash_outcomes(p, t, Mechanism::kTda, limits);
    const Matching q_outcome =
        run_mechanism(Mechanism::kTda, p.structure, t, q);
    c.truth("undominated-keeps-Q-outcome",
            std::count(undominated.outcomes.begin(),
                       undominated.outcomes.end(), q_outcome) == 1,
            outcome_set_string(p, undominated.outcomes));
    const auto undominated_rev =
        enumerate_undominated_nash_outcomes(p, t_rev, Mechanism::kTda, limits);
    const Matching mu = run_mechanism(Mechanism::kTda, p.structure, t, q);
    c.truth("undominated-drops-it-under-2,1,1",
            std::count(undominated_rev.outcomes.begin(),
                       undominated_rev.outcomes.end(), mu) == 0,
            outcome_set_string(p, undominated_rev.outcomes));
    c.truth("Q1-undominated",
            !is_weakly_dominated(p, t, Mechanism::kTda, 0, q[0], limits));

    // Under (2,1,1) only reports outcome-equivalent to R_2 survive for 2.
    {
      const StrategySpace space(p.schools, limits.max_strategy_schools);
      const OutcomeTable table(p.structure, t_rev, Mechanism::kTda, space,
                               limits);
      const DominanceTable dom(table, p.preferences);
      const int truthful = space.index_of(p.preferences[1]);
      bool ok = !dom.dominated(1, truthful);
      for (int s = 0; s < space.size() && ok; ++s) {
        if (dom.dominated(1, s)) continue;
        for (int64_t x = 0; x < table.size() && ok; ++x) {
          if (table.strategy_of(x, 1) != s) continue;
          ok = table.assignment(x, 1) ==
               table.assignment(x + table.stride(1) * (truthful - s), 1);
        }
      }
      c.truth("student2-unique-undominated-under-2,1,1", ok);
    }

    c.truth("blocking-pair-(2,b)",
            find_blocking_pairs(p.structure, q_outcome, p.preferences)
                .has_pair(1, 1));
    c.truth("sosm-stable",
            is_stable(p.structure, sosm(p.structure, p.preferences),
                      p.preferences));
    c.equal("stable-set", "{((1,c),(2,b),(3,a))}",
            outcome_set_string(p, stable_set(p.structure, p.preferences)));
    c.truth("tda-truthful-tier-stable",
            is_stable_wrt_tiers(
                p.structure, t,
                run_mechanism(Mechanism::kTda, p.structure, t, p.preferences),
                p.preferences));
    const auto cycles = find_within_tier_cycles(p.structure, t);
    c.truth("tier2-cycle-over-b-c",
            std::any_of(cycles.begin(), cycles.end(), [](const Cycle& x) {
              return std::min(x.school_a, x.school_b) == 1 &&
                     std::max(x.school_a, x.school_b) == 2;
            }));
    c.truth("not-within-tier-acyclic",
            !is_within_tier_acyclic(p.structure, t));
    const std::vector<StudentIndex> two{1}, three{2};
    c.equal("school-a-gets-worse-student", "worse",
            verdict_name(responsive_dominates(two, three, 1,
                                              p.structure.priorities[0])));
    c.equal("reshuffle-R1", "(a,c,b |)",
            format_preference(p, reshuffle(p.preferences[0], t, p.schools)));
    c.equal("reshuffle-Q1", "(c,b | a)",
            format_preference(p, reshuffle(q[0], t, p.schools)));
    c.truth("R1-not-aligned", !is_aligned(p.preferences[0], t));
    c.equal("within-tier-consistent", "(c,b | a)",
            format_preference(
                p, within_tier_consistent(make_preference({1, 2}, p.schools),
                                          p.preferences[0], t)));

    const auto cycle = cycles.front();
    const auto ce = construct_cycle_counterexample(p, t, cycle, limits);
    c.truth("cycle-construction-unstable",
            !is_stable(p.structure, ce.outcome, ce.truth));

    const std::vector<SchoolIndex> only_a{0};
    const AuditResult audit = guarantee_audit(p, t, only_a, limits);
    c.truth("guarantee-fails-for-a", !audit.passed(),
            std::to_string(audit.worse) + " worse");
    // The exhibited equilibrium outcome at the example's own profile.
    const auto at_truth = enumerate_nash_outcomes(p, t, Mechanism::kTda, limits);
    const Matching s_mu = sosm(p.structure, p.preferences);
    bool found = false;
    for (const Matching& o : at_truth.outcomes) {
      if (o == q_outcome &&
          responsive_dominates(o.assigned_to(0), s_mu.assigned_to(0), 1,
                               p.structure.priorities[0]) == Verdict::kWorse) {
        found = true;
      }
    }
    c.truth("guarantee-violation-at-example-profile", found);

    const AlignedCheck aligned =
        check_aligned_domain_strategyproofness(p, t, limits);
    c.truth("unaligned-environment-witness",
            !aligned.all_aligned && !aligned.strategy_proof &&
                aligned.environment.has_value(),
            deviation_string(p, aligned.witness));
    c.truth("single-tier-strategy-proof",
            check_aligned_domain_strategyproofness(p, tiers_of({1, 1, 1}),
                                                   limits)
                .strategy_proof);
  });

  c.set_group("exp2");
  c.guarded("exp2", [&] {
    const Problem p = load_fixture("exp2");
    const TierStructure fine = tiers_of({1, 2, 3});
    const TierStructure coarse = tiers_of({1, 2, 2});
    c.truth("is-refinement", is_refinement(fine, coarse));
    c.truth("truthful-nash-under-1,2,3",
            is_nash(p, fine, Mechanism::kTda, p.preferences, limits));
    c.truth("truthful-not-nash-under-1,2,2",
            !is_nash(p, coarse, Mechanism::kTda, p.preferences, limits));
    c.equal("witness-under-1,2,2", "(3, (b,c | a), b)",
            deviation_string(p, is_manipulable_at(p, coarse, Mechanism::kTda,
                                                  limits)));
  });

  c.set_group("exp3");
  c.guarded("exp3", [&] {
    const Problem p = load_fixture("exp3");
    const TierStructure fine = tiers_of({1, 2, 3});
    const TierStructure coarse = tiers_of({1, 2, 2});
    const std::vector<SchoolIndex> order{0, 1, 2};
    c.truth("finest-matches-1,2,3", finest_tiers(3, order) == fine);
    const Matching mf =
        run_mechanism(Mechanism::kTda, p.structure, fine, p.preferences);
    const Matching mc =
        run_mechanism(Mechanism::kTda, p.structure, coarse, p.preferences);
    c.equal("tda-1,2,3", "((1,a),(2,b),(3,c))", format_matching(p, mf));
    c.truth("tda-1,2,3-stable", is_stable(p.structure, mf, p.preferences));
    c.equal("tda-1,2,2", "((1,a),(2,c),(3,b))", format_matching(p, mc));
    c.truth("tda-1,2,2-blocked-by-(1,c)",
            find_blocking_pairs(p.structure, mc, p.preferences)
                .has_pair(0, 2));
    c.truth("tda-1,2,2-tier-stable",
            is_stable_wrt_tiers(p.structure, coarse, mc, p.preferences));
  });

  c.set_group("expB1");
  c.guarded("expB1", [&] {
    const Problem p = load_fixture("expB1");
    c.equal("ne-1,2,2", "{((1,a),(2,b),(3,c))}",
            outcome_set_string(p, enumerate_nash_outcomes(
                                      p, tiers_of({1, 2, 2}), Mechanism::kTda,
                                      limits)
                                      .outcomes));
    c.equal("ne-1,1,2",
            expected_set_string({"((1,a),(2,b),(3,c))", "((1,a),(2,c),(3,b))"}),
            outcome_set_string(p, enumerate_nash_outcomes(
                                      p, tiers_of({1, 1, 2}), Mechanism::kTda,
                                      limits)
                                      .outcomes));
  });

  c.set_group("expB2");
  c.guarded("expB2", [&] {
    const Problem p = load_fixture("expB2");
    c.truth("cycle-in-tier-b-c",
            !is_within_tier_acyclic(p.structure, tiers_of({1, 2, 2})));
  });

  c.set_group("welfare");
  c.guarded("welfare", [&] {
    const Problem p = load_fixture("exp1");
    const TierStructure t = tiers_of({1, 2, 2});
    const std::vector<SchoolIndex> same{2};
    const auto w1 = construct_welfare_counterexample(p, t, 1, same, limits);
    c.equal("same-tier-sosm", "((1,b),(3,c))", format_matching(p, w1.sosm));
    c.equal("same-tier-ne", "((1,c),(3,b))", format_matching(p, w1.outcome));
    c.equal("same-tier-verdict", "worse", verdict_name(w1.verdict));
    const std::vector<SchoolIndex> pair{1, 2};
    const auto w2 = construct_welfare_counterexample(p, t, 0, pair, limits);
    c.equal("other-tier-sosm", "((1,c),(2,b),(3,a))",
            format_matching(p, w2.sosm));
    c.equal("other-tier-ne", "((1,c),(2,a),(3,b))",
            format_matching(p, w2.outcome));
    c.equal("other-tier-verdict", "worse", verdict_name(w2.verdict));
  });

  return c.take();
}

std::vector<NamedCheck> verify_bayes_fixtures(const Limits& limits,
                                              const std::string& only) {
  Checks c("");
  auto tuple_string = [](const Problem& p, const std::vector<Matching>& t) {
    std::string out = "[";
    for (size_t k = 0; k < t.size(); ++k) {
      out += (k ? "; " : "") + format_matching(p, t[k]);
    }
    return out + "]";
  };
  auto tuples_string = [&](const Problem& p,
                           const std::vector<std::vector<Matching>>& ts) {
    std::string out = "{";
    for (size_t k = 0; k < ts.size(); ++k) {
      out += (k ? ", " : "") + tuple_string(p, ts[k]);
    }
    return out + "}";
  };
  auto report_profile = [](const Problem& p, const Profile& q) {
    BayesProfile out;
    out.reports = q;
    (void)p;
    return out;
  };

  if (only.empty() || only == "exp-prioun") {
    c.set_group("exp-prioun");
    c.guarded("exp-prioun", [&] {
      const BayesianProblem bp =
          load_bayesian_problem(fixture_json("exp-prioun"));
      const Problem& p = bp.base;
      const BayesProfile q = report_profile(p, p.reports.at("Q"));
      const BneReport tda = enumerate_bne_outcomes(bp, Mechanism::kTda, limits);
      c.equal("tda-bne-unique-tuple",
              "{[((1,b),(2,c),(3,a)); ((1,c),(2,b),(3,a))]}",
              tuples_string(p, tda.outcome_tuples));
      c.equal("eu-student-2-at-Q", "13/5",
              format_rational(expected_utility(bp, Mechanism::kTda, q, 1)));
      c.truth("Q-is-bne", is_bayes_nash(bp, Mechanism::kTda, q, limits));
      const BayesProfile truthful = truthful_profile(bp);
      c.truth("truthful-bne-under-da",
              is_bayes_nash(bp, Mechanism::kDa, truthful, limits));
      c.truth("truthful-not-bne-under-tda",
              !is_bayes_nash(bp, Mechanism::kTda, truthful, limits));
      const auto da_truth = bayes_outcomes(bp, Mechanism::kDa, truthful);
      c.equal("da-truthful-tuple", "[((1,b),(2,a),(3,c)); ((1,c),(2,b),(3,a))]",
              tuple_string(p, da_truth));
      if (tda.outcome_tuples.size() == 1) {
        const auto& tuple = tda.outcome_tuples.front();
        PriorityStructure ps0 = p.structure;
        ps0.priorities = bp.states[0].priorities;
        const StabilityReport r =
            find_blocking_pairs(ps0, tuple[0], bp.states[0].preferences);
        std::string pairs;
        for (const auto& bpair : r.blocking_pairs) {
          pairs += "(" + p.students[bpair.student] + "," +
                   p.schools[bpair.school] + ")";
        }
        c.truth("state-1-outcome-unstable", !r.stable(),
                pairs.empty() ? "stable" : "blocked by " + pairs);
        bool acyclic = true;
        for (const auto& st : bp.states) {
          PriorityStructure ps = p.structure;
          ps.priorities = st.priorities;
          acyclic = acyclic && is_within_tier_acyclic(ps, p.tiers);
        }
        c.truth("both-states-within-tier-acyclic", acyclic);
        const BneReport da = enumerate_bne_outcomes(bp, Mechanism::kDa, limits);
        c.truth("tda-tuple-not-a-da-bne-outcome",
                std::find(da.outcome_tuples.begin(), da.outcome_tuples.end(),
                          tuple) == da.outcome_tuples.end() &&
                    tuple != da_truth,
                std::to_string(da.outcome_tuples.size()) + " DA tuples");
        c.truth("school-a-gets-student-3-in-state-1",
                tuple[0].assigned_to(0) == std::vector<StudentIndex>{2});
      }
    });
  }

  if (only.empty() || only == "expB3-prefun") {
    c.set_group("expB3-prefun");
    c.guarded("expB3-prefun", [&] {
      const BayesianProblem bp =
          load_bayesian_problem(fixture_json("expB3-prefun"));
      const Problem& p = bp.base;
      const BneReport tda = enumerate_bne_outcomes(bp, Mechanism::kTda, limits);
      c.equal("tda-bne-unique-tuple",
              "{[((1,b),(2,c),(3,a)); ((1,c),(2,b),(3,a))]}",
              tuples_string(p, tda.outcome_tuples));
      const BayesProfile truthful = truthful_profile(bp);
      const auto da_truth = bayes_outcomes(bp, Mechanism::kDa, truthful);
      c.equal("da-truthful-tuple", "[((1,b),(2,a),(3,c)); ((1,c),(2,b),(3,a))]",
              tuple_string(p, da_truth));
      BayesProfile q;
      q.reports = {make_preference({1}, p.schools),
                   make_preference({1, 2}, p.schools),
                   make_preference({1, 2, 0}, p.schools)};
      q.type_reports = {make_preference({1}, p.schools),
                        make_preference({2}, p.schools)};
      c.truth("printed-profile-is-bne",
              is_bayes_nash(bp, Mechanism::kTda, q, limits));
      c.equal("printed-profile-outcomes",
              "[((1,b),(2,c),(3,a)); ((1,c),(2,b),(3,a))]",
              tuple_string(p, bayes_outcomes(bp, Mechanism::kTda, q)));
      if (tda.outcome_tuples.size() == 1) {
        const auto& tuple = tda.outcome_tuples.front();
        c.truth("type-1-outcome-blocked-by-(2,a)",
                find_blocking_pairs(p.structure, tuple[0],
                                    bp.states[0].preferences)
                    .has_pair(1, 0));
        c.truth("school-a-gets-student-3-under-type-1",
                tuple[0].assigned_to(0) == std::vector<StudentIndex>{2});
      }
    });
  }

  if (only.empty() || only == "expB4-prioun2") {
    c.set_group("expB4-prioun2");
    c.guarded("expB4-prioun2", [&] {
      const BayesianProblem bp =
          load_bayesian_problem(fixture_json("expB4-prioun2"));
      const Problem& p = bp.base;
      const BneReport tda = enumerate_bne_outcomes(bp, Mechanism::kTda, limits);
      c.equal("tda-bne-unique-tuple",
              "{[((1,a),(2,b),(3,c)); ((1,b),(2,a),(3,c))]}",
              tuples_string(p, tda.outcome_tuples));
      const BayesProfile truthful = truthful_profile(bp);
      c.equal("da-truthful-tuple", "[((1,a),(2,c),(3,b)); ((1,b),(2,a),(3,c))]",
              tuple_string(p, bayes_outcomes(bp, Mechanism::kDa, truthful)));
      const BayesProfile q = report_profile(p, p.reports.at("Q"));
      c.truth("Q-is-bne", is_bayes_nash(bp, Mechanism::kTda, q, limits));
      if (tda.outcome_tuples.size() == 1) {
        c.truth("school-c-gets-student-3-in-state-1",
                tda.outcome_tuples.front()[0].assigned_to(2) ==
                    std::vector<StudentIndex>{2});
      }
    });
  }
  return c.take();
}

}  // namespace tiermatch
