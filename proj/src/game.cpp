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

#include "tiermatch/game.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <stdexcept>

#include "parallel.hpp"

namespace tiermatch {
namespace {

int rank_in(const std::vector<int>& table, SchoolIndex s) {
  return s == kSelf ? table.back() : table[s];
}

std::vector<std::vector<int>> rank_tables(const Profile& truth,
                                          int num_schools) {
  std::vector<std::vector<int>> out;
  out.reserve(truth.size());
  for (const Preference& p : truth) out.push_back(p.rank_table(num_schools));
  return out;
}

void collect_orders(int m, std::vector<SchoolIndex>& current,
                    std::vector<bool>& used,
                    std::vector<std::vector<SchoolIndex>>& out) {
  out.push_back(current);
  for (SchoolIndex s = 0; s < m; ++s) {
    if (used[s]) continue;
    used[s] = true;
    current.push_back(s);
    collect_orders(m, current, used, out);
    current.pop_back();
    used[s] = false;
  }
}

// Lists `first` in order, then everybody else by index.
PriorityOrder priority_with_front(int num_students,
                                  std::initializer_list<StudentIndex> first) {
  std::vector<StudentIndex> ranking(first);
  for (StudentIndex l = 0; l < num_students; ++l) {
    if (std::find(ranking.begin(), ranking.end(), l) == ranking.end()) {
      ranking.push_back(l);
    }
  }
  return PriorityOrder(std::move(ranking));
}

std::vector<Matching> distinct_outcomes(const OutcomeTable& table,
                                        std::span<const int64_t> indices) {
  std::vector<Matching> out;
  out.reserve(indices.size());
  for (int64_t p : indices) out.push_back(table.matching(p));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Limits limits_from_env() {
  Limits limits;
  if (const char* env = std::getenv("TIERMATCH_GUARD_PROFILES")) {
    char* end = nullptr;
    const long long value = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0' || value <= 0) {
      throw Error(ErrorKind::kInput,
                  std::string("TIERMATCH_GUARD_PROFILES must be a positive "
                              "integer, got '") +
                      env + "'");
    }
    limits.profile_guard = value;
  }
  return limits;
}

StrategySpace::StrategySpace(const std::vector<std::string>& school_ids,
                             int max_schools) {
  const int m = static_cast<int>(school_ids.size());
  if (m > max_schools || m > 100) {
    throw Error(ErrorKind::kGuard,
                "strategy space needs at most " +
                    std::to_string(std::min(max_schools, 100)) +
                    " schools, got " + std::to_string(m));
  }
  std::vector<std::vector<SchoolIndex>> orders;
  std::vector<SchoolIndex> current;
  std::vector<bool> used(m, false);
  collect_orders(m, current, used, orders);
  std::sort(orders.begin(), orders.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x < y;
  });
  for (auto& order : orders) {
    index_.emplace(order, static_cast<int>(strategies_.size()));
    strategies_.push_back(make_preference(std::move(order), school_ids));
  }
}

int StrategySpace::index_of(const Preference& p) const {
  auto it = index_.find(p.acceptable);
  if (it == index_.end()) {
    throw Error(ErrorKind::kInput, "report is not over the school set");
  }
  return it->second;
}

std::vector<Preference> strategy_space(
    const std::vector<std::string>& school_ids, int max_schools) {
  return StrategySpace(school_ids, max_schools).all();
}

int64_t checked_profile_count(int num_strategies, int num_students,
                              int64_t guard) {
  int64_t count = 1;
  for (int i = 0; i < num_students; ++i) {
    if (count > guard / num_strategies) {
      throw Error(ErrorKind::kGuard,
                  std::to_string(num_strategies) + "^" +
                      std::to_string(num_students) +
                      " strategy profiles exceed the guard of " +
                      std::to_string(guard) +
                      "; reduce the instance or raise "
                      "TIERMATCH_GUARD_PROFILES");
    }
    count *= num_strategies;
  }
  if (count > guard) {
    throw Error(ErrorKind::kGuard, "strategy profiles exceed the guard");
  }
  return count;
}

OutcomeTable::OutcomeTable(const PriorityStructure& ps,
                           const TierStructure& tiers, Mechanism mech,
                           const StrategySpace& space, const Limits& limits)
    : space_(&space),
      num_students_(ps.num_students),
      num_strategies_(space.size()),
      size_(checked_profile_count(space.size(), ps.num_students,
                                  limits.profile_guard)),
      strides_(ps.num_students, 1) {
  for (int i = num_students_ - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * num_strategies_;
  }
  cells_.assign(static_cast<size_t>(size_ * num_students_), 0);
  internal::parallel_for(size_, limits.jobs, [&](int64_t begin, int64_t end) {
    Profile reports(num_students_);
    for (int64_t p = begin; p < end; ++p) {
      for (StudentIndex i = 0; i < num_students_; ++i) {
        reports[i] = space[strategy_of(p, i)];
      }
      const Matching m = run_mechanism(mech, ps, tiers, reports);
      for (StudentIndex i = 0; i < num_students_; ++i) {
        cells_[p * num_students_ + i] = static_cast<int8_t>(m[i]);
      }
    }
  });
}

int64_t OutcomeTable::encode(std::span<const int> strategies) const {
  int64_t p = 0;
  for (StudentIndex i = 0; i < num_students_; ++i) {
    p += strides_[i] * strategies[i];
  }
  return p;
}

std::vector<int> OutcomeTable::decode(int64_t profile) const {
  std::vector<int> out(num_students_);
  for (StudentIndex i = 0; i < num_students_; ++i) {
    out[i] = strategy_of(profile, i);
  }
  return out;
}

Profile OutcomeTable::profile(int64_t index) const {
  Profile out;
  out.reserve(num_students_);
  for (StudentIndex i = 0; i < num_students_; ++i) {
    out.push_back((*space_)[strategy_of(index, i)]);
  }
  return out;
}

Matching OutcomeTable::matching(int64_t profile) const {
  Matching m;
  m.assignment.resize(num_students_);
  for (StudentIndex i = 0; i < num_students_; ++i) {
    m.assignment[i] = assignment(profile, i);
  }
  return m;
}

std::vector<int64_t> nash_profile_indices(const OutcomeTable& table,
                                          const Profile& truth, int jobs) {
  const int n = table.num_students();
  const int m = static_cast<int>(truth.empty()
                                     ? 0
                                     : truth[0].acceptable.size() +
                                           truth[0].unacceptable.size());
  const auto ranks = rank_tables(truth, m);
  const int64_t size = table.size();

  // best[i][p with digit i zeroed] = best rank i can reach against p_{-i}.
  std::vector<std::vector<int>> best(n, std::vector<int>(size, INT_MAX));
  for (StudentIndex i = 0; i < n; ++i) {
    const int64_t stride = table.stride(i);
    for (int64_t p = 0; p < size; ++p) {
      const int64_t base = p - stride * table.strategy_of(p, i);
      const int r = rank_in(ranks[i], table.assignment(p, i));
      if (r < best[i][base]) best[i][base] = r;
    }
  }

  const int64_t workers =
      std::clamp<int64_t>(jobs, 1, std::max<int64_t>(size, 1));
  std::vector<std::vector<int64_t>> found(workers);
  const int64_t chunk = (size + workers - 1) / workers;
  internal::parallel_for(workers, static_cast<int>(workers),
                         [&](int64_t wb, int64_t we) {
    for (int64_t w = wb; w < we; ++w) {
      const int64_t begin = w * chunk;
      const int64_t end = std::min(size, begin + chunk);
      for (int64_t p = begin; p < end; ++p) {
        bool nash = true;
        for (StudentIndex i = 0; i < n && nash; ++i) {
          const int64_t base = p - table.stride(i) * table.strategy_of(p, i);
          nash = rank_in(ranks[i], table.assignment(p, i)) == best[i][base];
        }
        if (nash) found[w].push_back(p);
      }
    }
  });
  std::vector<int64_t> out;
  for (const auto& part : found) out.insert(out.end(), part.begin(), part.end());
  return out;
}

DominanceTable::DominanceTable(const OutcomeTable& table,
                               const Profile& truth) {
  const int n = table.num_students();
  const int k = table.num_strategies();
  const int m = static_cast<int>(truth.empty()
                                     ? 0
                                     : truth[0].acceptable.size() +
                                           truth[0].unacceptable.size());
  const auto ranks = rank_tables(truth, m);
  const int64_t opponents = table.size() / k;
  dominator_.assign(n, std::vector<int>(k, -1));
  for (StudentIndex i = 0; i < n; ++i) {
    const int64_t stride = table.stride(i);
    // payoff[s * opponents + o]: rank of i's outcome playing s against o.
    std::vector<int> payoff(static_cast<size_t>(table.size()));
    for (int64_t p = 0; p < table.size(); ++p) {
      const int s = table.strategy_of(p, i);
      const int64_t high = p / (stride * k);
      const int64_t low = p % stride;
      const int64_t o = high * stride + low;
      payoff[s * opponents + o] = rank_in(ranks[i], table.assignment(p, i));
    }
    for (int a = 0; a < k; ++a) {
      const int* pa = payoff.data() + a * opponents;
      for (int b = 0; b < k; ++b) {
        if (b == a) continue;
        const int* pb = payoff.data() + b * opponents;
        bool never_worse = true;
        bool sometimes_better = false;
        for (int64_t o = 0; o < opponents && never_worse; ++o) {
          if (pb[o] > pa[o]) never_worse = false;
          if (pb[o] < pa[o]) sometimes_better = true;
        }
        if (never_worse && sometimes_better) {
          dominator_[i][a] = b;
          break;
        }
      }
    }
  }
}

bool is_nash(const Problem& problem, const TierStructure& tiers,
             Mechanism mech, const Profile& reports, const Limits& limits) {
  return !find_profitable_deviation(problem, tiers, mech, reports, limits)
              .has_value();
}

std::optional<Deviation> find_profitable_deviation(
    const Problem& problem, const TierStructure& tiers, Mechanism mech,
    const Profile& reports, const Limits& limits) {
  const StrategySpace space(problem.schools, limits.max_strategy_schools);
  const PriorityStructure& ps = problem.structure;
  const Matching current = run_mechanism(mech, ps, tiers, reports);
  Profile trial = reports;
  for (StudentIndex i = 0; i < problem.num_students(); ++i) {
    const Preference& truth = problem.preferences[i];
    const int now = truth.rank(current[i]);
    int best_rank = now;
    int best_strategy = -1;
    SchoolIndex best_school = current[i];
    for (int s = 0; s < space.size(); ++s) {
      trial[i] = space[s];
      const SchoolIndex got = run_mechanism(mech, ps, tiers, trial)[i];
      const int r = truth.rank(got);
      if (r < best_rank) {
        best_rank = r;
        best_strategy = s;
        best_school = got;
      }
    }
    trial[i] = reports[i];
    if (best_strategy >= 0) {
      return Deviation{i, space[best_strategy], best_school};
    }
  }
  return std::nullopt;
}

std::optional<Deviation> is_manipulable_at(const Problem& problem,
                                           const TierStructure& tiers,
                                           Mechanism mech,
                                           const Limits& limits) {
  return find_profitable_deviation(problem, tiers, mech, problem.preferences,
                                   limits);
}

EquilibriumReport enumerate_nash_outcomes(const Problem& problem,
                                          const TierStructure& tiers,
                                          Mechanism mech,
                                          const Limits& limits) {
  const StrategySpace space(problem.schools, limits.max_strategy_schools);
  const OutcomeTable table(problem.structure, tiers, mech, space, limits);
  const std::vector<int64_t> nash =
      nash_profile_indices(table, problem.preferences, limits.jobs);
  EquilibriumReport report;
  report.mechanism = mech;
  report.tiers = tiers;
  for (int64_t p : nash) report.equilibria.push_back(table.profile(p));
  report.outcomes = distinct_outcomes(table, nash);
  return report;
}

EquilibriumReport enumerate_undominated_nash_outcomes(
    const Problem& problem, const TierStructure& tiers, Mechanism mech,
    const Limits& limits) {
  const StrategySpace space(problem.schools, limits.max_strategy_schools);
  const OutcomeTable table(problem.structure, tiers, mech, space, limits);
  const DominanceTable dominance(table, problem.preferences);
  std::vector<int64_t> kept;
  for (int64_t p : nash_profile_indices(table, problem.preferences,
                                        limits.jobs)) {
    bool undominated = true;
    for (StudentIndex i = 0; i < problem.num_students() && undominated; ++i) {
      undominated = !dominance.dominated(i, table.strategy_of(p, i));
    }
    if (undominated) kept.push_back(p);
  }
  EquilibriumReport report;
  report.mechanism = mech;
  report.tiers = tiers;
  report.undominated_only = true;
  for (int64_t p : kept) report.equilibria.push_back(table.profile(p));
  report.outcomes = distinct_outcomes(table, kept);
  return report;
}

std::optional<Preference> is_weakly_dominated(const Problem& problem,
                                              const TierStructure& tiers,
                                              Mechanism mech,
                                              StudentIndex student,
                                              const Preference& strategy,
                                              const Limits& limits) {
  if (student < 0 || student >= problem.num_students()) {
    throw Error(ErrorKind::kInput, "unknown student index");
  }
  const StrategySpace space(problem.schools, limits.max_strategy_schools);
  const OutcomeTable table(problem.structure, tiers, mech, space, limits);
  const DominanceTable dominance(table, problem.preferences);
  const int b = dominance.dominator(student, space.index_of(strategy));
  if (b < 0) return std::nullopt;
  return space[b];
}

Preference reshuffle(const Preference& report, const TierStructure& tiers,
                     const std::vector<std::string>& school_ids) {
  std::vector<SchoolIndex> acceptable = report.acceptable;
  std::stable_sort(acceptable.begin(), acceptable.end(),
                   [&](SchoolIndex a, SchoolIndex b) {
                     return tiers.tier_of(a) < tiers.tier_of(b);
                   });
  return make_preference(std::move(acceptable), school_ids);
}

bool is_aligned(const Preference& p, const TierStructure& tiers) {
  for (size_t k = 1; k < p.acceptable.size(); ++k) {
    if (tiers.tier_of(p.acceptable[k - 1]) > tiers.tier_of(p.acceptable[k])) {
      return false;
    }
  }
  return true;
}

Preference within_tier_consistent(const Preference& report,
                                  const Preference& truth,
                                  const TierStructure& tiers) {
  Preference out = report;
  for (int k = 1; k <= tiers.count(); ++k) {
    std::vector<size_t> slots;
    std::vector<SchoolIndex> members;
    for (size_t pos = 0; pos < out.acceptable.size(); ++pos) {
      if (tiers.tier_of(out.acceptable[pos]) == k) {
        slots.push_back(pos);
        members.push_back(out.acceptable[pos]);
      }
    }
    std::sort(members.begin(), members.end(),
              [&](SchoolIndex a, SchoolIndex b) { return truth.prefers(a, b); });
    for (size_t x = 0; x < slots.size(); ++x) {
      out.acceptable[slots[x]] = members[x];
    }
  }
  return out;
}

AlignedCheck check_aligned_domain_strategyproofness(
    const Problem& problem, const TierStructure& tiers,
    const Limits& limits) {
  AlignedCheck result;
  const int n = problem.num_students();
  for (StudentIndex i = 0; i < n && result.all_aligned; ++i) {
    result.all_aligned = is_aligned(problem.preferences[i], tiers);
  }

  if (result.all_aligned) {
    const StrategySpace space(problem.schools, limits.max_strategy_schools);
    const OutcomeTable table(problem.structure, tiers, Mechanism::kTda, space,
                             limits);
    const auto ranks = rank_tables(problem.preferences, problem.num_schools());
    const int k = space.size();
    for (StudentIndex i = 0; i < n; ++i) {
      const int truthful = space.index_of(problem.preferences[i]);
      const int64_t stride = table.stride(i);
      for (int64_t p = 0; p < table.size(); ++p) {
        if (table.strategy_of(p, i) != 0) continue;
        const int honest =
            rank_in(ranks[i], table.assignment(p + truthful * stride, i));
        for (int s = 0; s < k; ++s) {
          const SchoolIndex got = table.assignment(p + s * stride, i);
          if (rank_in(ranks[i], got) < honest) {
            result.strategy_proof = false;
            result.witness = Deviation{i, space[s], got};
            return result;
          }
        }
      }
    }
    return result;
  }

  // Environment for the first unaligned student and violating pair:
  // s2 preferred to s1 while s1 sits in an earlier tier.
  for (StudentIndex i = 0; i < n; ++i) {
    const Preference& truth = problem.preferences[i];
    const auto& acc = truth.acceptable;
    for (size_t hi = 0; hi < acc.size(); ++hi) {
      for (size_t lo = hi + 1; lo < acc.size(); ++lo) {
        if (tiers.tier_of(acc[hi]) <= tiers.tier_of(acc[lo])) continue;
        const SchoolIndex s2 = acc[hi];
        const SchoolIndex s1 = acc[lo];
        Problem env = problem.with_tiers(tiers);
        env.reports.clear();
        for (SchoolIndex s = 0; s < env.num_schools(); ++s) {
          env.structure.quotas[s] = (s == s1 || s == s2) ? 1 : 0;
        }
        env.structure.priorities[s2] = priority_with_front(n, {i});
        for (StudentIndex j = 0; j < n; ++j) {
          if (j == i) continue;
          std::vector<SchoolIndex> keep;
          for (SchoolIndex s : env.preferences[j].acceptable) {
            if (s != s1 && s != s2) keep.push_back(s);
          }
          env.preferences[j] = make_preference(std::move(keep), env.schools);
        }
        std::vector<SchoolIndex> dropped;
        for (SchoolIndex s : acc) {
          if (s != s1) dropped.push_back(s);
        }
        Profile deviated = env.preferences;
        deviated[i] = make_preference(std::move(dropped), env.schools);
        const Matching honest = tiered_deferred_acceptance(
                                    env.structure, tiers, env.preferences)
                                    .final;
        const Matching gamed =
            tiered_deferred_acceptance(env.structure, tiers, deviated).final;
        if (honest[i] != s1 || gamed[i] != s2) {
          throw std::logic_error(
              "strategy-proofness environment failed its own check");
        }
        result.strategy_proof = false;
        result.witness = Deviation{i, deviated[i], s2};
        result.environment = std::move(env);
        return result;
      }
    }
  }
  // Unaligned only through schools that never appear acceptable: unreachable
  // since alignment is checked over the acceptable prefix.
  throw std::logic_error("unaligned preference without a violating pair");
}

CycleCounterexample construct_cycle_counterexample(const Problem& base,
                                                   const TierStructure& tiers,
                                                   const Cycle& cycle,
                                                   const Limits& limits) {
  const SchoolIndex a = cycle.school_a;
  const SchoolIndex b = cycle.school_b;
  if (tiers.tier_of(a) != tiers.tier_of(b)) {
    throw Error(ErrorKind::kPrecondition,
                "cycle spans tiers " + std::to_string(tiers.tier_of(a)) +
                    " and " + std::to_string(tiers.tier_of(b)));
  }
  const auto& ids = base.schools;
  const int n = base.num_students();
  Profile truth(n, make_preference({}, ids));
  truth[cycle.i] = make_preference({b, a}, ids);
  truth[cycle.j] = make_preference({a}, ids);
  truth[cycle.k] = make_preference({a, b}, ids);
  for (StudentIndex l : cycle.scarcity_a) truth[l] = make_preference({a}, ids);
  for (StudentIndex l : cycle.scarcity_b) truth[l] = make_preference({b}, ids);

  CycleCounterexample out;
  out.truth = truth;
  out.equilibrium = truth;
  out.equilibrium[cycle.j] = make_preference({}, ids);
  out.outcome = tiered_deferred_acceptance(base.structure, tiers,
                                           out.equilibrium)
                    .final;

  Problem env = base.with_tiers(tiers).with_preferences(truth);
  if (!is_nash(env, tiers, Mechanism::kTda, out.equilibrium, limits) ||
      !find_blocking_pairs(env.structure, out.outcome, truth)
           .has_pair(cycle.j, a)) {
    throw std::logic_error("cycle construction failed its own check");
  }
  return out;
}

WelfareCounterexample construct_welfare_counterexample(
    const Problem& base, const TierStructure& tiers, SchoolIndex target,
    std::span<const SchoolIndex> companions, const Limits& limits) {
  const int n = base.num_students();
  if (n < 3) {
    throw Error(ErrorKind::kPrecondition,
                "welfare construction needs at least 3 students, got " +
                    std::to_string(n));
  }
  const auto& ids = base.schools;
  const StudentIndex i = 0, j = 1, k = 2;
  Problem env = base.with_tiers(tiers);
  env.reports.clear();
  std::fill(env.structure.quotas.begin(), env.structure.quotas.end(), 1);
  Profile truth(n, make_preference({}, ids));
  Profile q;
  const SchoolIndex s_star = target;

  if (companions.size() == 1 && companions[0] != s_star &&
      tiers.tier_of(companions[0]) == tiers.tier_of(s_star)) {
    const SchoolIndex s_prime = companions[0];
    env.structure.priorities[s_star] = priority_with_front(n, {i, j, k});
    env.structure.priorities[s_prime] = priority_with_front(n, {k, i});
    truth[i] = make_preference({s_prime, s_star}, ids);
    truth[j] = make_preference({s_star}, ids);
    truth[k] = make_preference({s_star, s_prime}, ids);
    q = truth;
    q[j] = make_preference({}, ids);
  } else if (companions.size() == 2 && companions[0] != companions[1] &&
             companions[0] != s_star && companions[1] != s_star &&
             tiers.tier_of(companions[0]) == tiers.tier_of(companions[1]) &&
             tiers.tier_of(companions[0]) != tiers.tier_of(s_star)) {
    const SchoolIndex s1 = companions[0];
    const SchoolIndex s2 = companions[1];
    env.structure.priorities[s_star] = priority_with_front(n, {k, j});
    env.structure.priorities[s1] = priority_with_front(n, {i, j, k});
    env.structure.priorities[s2] = priority_with_front(n, {k, i});
    truth[i] = make_preference({s2, s_star, s1}, ids);
    truth[j] = make_preference({s1, s_star, s2}, ids);
    truth[k] = make_preference({s1, s_star, s2}, ids);
    q = truth;
    q[i] = make_preference({s2, s1}, ids);
    q[j] = make_preference({s_star}, ids);
    q[k] = make_preference({s1, s2}, ids);
  } else {
    throw Error(ErrorKind::kPrecondition,
                "companions must be one school in the target's tier or two "
                "schools sharing a different tier");
  }
  env.preferences = truth;

  WelfareCounterexample out{env, q, sosm(env.structure, truth),
                            tiered_deferred_acceptance(env.structure, tiers, q)
                                .final,
                            Verdict::kEqual};
  const std::vector<StudentIndex> got = out.outcome.assigned_to(s_star);
  const std::vector<StudentIndex> stable = out.sosm.assigned_to(s_star);
  out.verdict = responsive_dominates(got, stable, 1,
                                     env.structure.priorities[s_star]);
  if (!is_nash(env, tiers, Mechanism::kTda, q, limits)) {
    throw std::logic_error("welfare construction failed its own check");
  }
  return out;
}

}  // namespace tiermatch
