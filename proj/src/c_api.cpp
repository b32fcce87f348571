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

#include "tiermatch/tiermatch.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tiermatch/analysis.hpp"
#include "tiermatch/bayes.hpp"
#include "tiermatch/fixtures.hpp"
#include "tiermatch/game.hpp"
#include "tiermatch/harness.hpp"
#include "tiermatch/mechanisms.hpp"
#include "tiermatch/scenario.hpp"

struct tm_problem {
  tiermatch::Problem problem;
  std::optional<tiermatch::BayesianProblem> bayes;
};

namespace {

using json = nlohmann::ordered_json;
using namespace tiermatch;

thread_local std::string last_error;

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `body`, translating exceptions into status codes.
template <class Fn>
tm_status guarded(char** out, Fn&& body) {
  if (out != nullptr) *out = nullptr;
  last_error.clear();
  try {
    return body();
  } catch (const Error& e) {
    last_error = e.what();
    return e.kind() == ErrorKind::kGuard ? TM_GUARD_EXCEEDED : TM_INPUT_ERROR;
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("malformed JSON: ") + e.what();
    return TM_INPUT_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TM_GUARD_EXCEEDED;
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return TM_ASSERTION_FAILED;
  }
}

tm_status emit(char** out, const json& doc, tm_status status = TM_OK) {
  if (out == nullptr) throw Error(ErrorKind::kInput, "null output pointer");
  *out = copy_out(doc.dump(2));
  return status;
}

const tm_problem& need(const tm_problem* p) {
  if (p == nullptr) throw Error(ErrorKind::kInput, "null problem handle");
  return *p;
}

tm_options defaults_of(const tm_options* o) {
  if (o != nullptr) return *o;
  tm_options d;
  tm_options_init(&d);
  return d;
}

std::string opt_str(const char* s) { return s == nullptr ? "" : s; }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

Limits limits_of(const tm_options& o) {
  Limits limits = limits_from_env();
  if (o.profile_guard > 0) limits.profile_guard = o.profile_guard;
  limits.jobs = o.jobs < 1 ? 1 : o.jobs;
  return limits;
}

TierStructure parse_tiers(const Problem& p, const std::string& text) {
  const auto parts = split_list(text);
  if (static_cast<int>(parts.size()) != p.num_schools()) {
    throw Error(ErrorKind::kInput,
                "tier override needs " + std::to_string(p.num_schools()) +
                    " labels, got " + std::to_string(parts.size()));
  }
  std::vector<int> labels;
  for (const auto& part : parts) {
    try {
      size_t used = 0;
      labels.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInput, "tier label '" + part + "' is not an integer");
    }
  }
  return TierStructure(labels);
}

struct Selection {
  Mechanism mechanism = Mechanism::kTda;
  std::string name = "tda";
  TierStructure tiers;
};

// Mechanism tag plus the tier structure it runs with.
Selection select(const Problem& p, const tm_options& o) {
  Selection s;
  s.name = o.mechanism == nullptr ? "tda" : o.mechanism;
  s.tiers = o.tiers == nullptr ? p.tiers : parse_tiers(p, o.tiers);
  if (s.name == "finest-tda") {
    s.mechanism = Mechanism::kTda;
    std::vector<SchoolIndex> order;
    if (o.order == nullptr) {
      for (int k = 0; k < p.num_schools(); ++k) order.push_back(k);
    } else {
      for (const auto& id : split_list(o.order)) {
        order.push_back(p.school_index(id));
      }
    }
    s.tiers = finest_tiers(p.num_schools(), order);
  } else {
    if (o.order != nullptr) {
      throw Error(ErrorKind::kInput, "a school order applies to finest-tda only");
    }
    s.mechanism = parse_mechanism(s.name);
  }
  return s;
}

Profile select_report(const Problem& p, const tm_options& o,
                      std::string* label) {
  if (o.report == nullptr) {
    *label = "truthful";
    return p.preferences;
  }
  const std::string r = o.report;
  if (r.find('{') != std::string::npos) {
    *label = "custom";
    return parse_profile(p, r);
  }
  const auto it = p.reports.find(r);
  if (it == p.reports.end()) {
    throw Error(ErrorKind::kInput, "no report named '" + r + "'");
  }
  *label = r;
  return it->second;
}

json assignment_json(const Problem& p, const Matching& m) {
  json out = json::object();
  for (int i = 0; i < p.num_students(); ++i) {
    out[p.students[i]] = m[i] == kSelf ? json(nullptr) : json(p.schools[m[i]]);
  }
  return out;
}

json ids(const std::vector<std::string>& names, const auto& indices) {
  json out = json::array();
  for (auto k : indices) out.push_back(names[k]);
  return out;
}

json profile_json(const Problem& p, const Profile& profile) {
  json out = json::object();
  for (int i = 0; i < p.num_students(); ++i) {
    out[p.students[i]] = format_preference(p, profile[i]);
  }
  return out;
}

json matching_list(const Problem& p, const std::vector<Matching>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(format_matching(p, m));
  return out;
}

json checks_json(const std::vector<NamedCheck>& checks, bool* all) {
  *all = true;
  json out = json::array();
  for (const auto& c : checks) {
    *all = *all && c.passed;
    out.push_back({{"group", c.group},
                   {"name", c.name},
                   {"passed", c.passed},
                   {"expected", c.expected},
                   {"actual", c.actual}});
  }
  return out;
}

}  // namespace

extern "C" {

void tm_options_init(tm_options* o) {
  if (o == nullptr) return;
  std::memset(o, 0, sizeof(*o));
  o->seed = 42;
  o->trials = 200;
  o->students = 3;
  o->schools = 3;
  o->jobs = 1;
}

const char* tm_version(void) { return "0.1.0"; }

const char* tm_last_error(void) { return last_error.c_str(); }

void tm_free_string(char* s) { std::free(s); }

tm_status tm_fixture_names(char** out) {
  return guarded(out, [&] { return emit(out, json(fixture_names())); });
}

tm_status tm_problem_from_json(const char* text, tm_problem** out) {
  return guarded(nullptr, [&] {
    if (out == nullptr || text == nullptr) {
      throw Error(ErrorKind::kInput, "null argument");
    }
    *out = nullptr;
    auto handle = std::make_unique<tm_problem>();
    if (is_bayesian_json(text)) {
      handle->bayes = load_bayesian_problem(text);
      handle->problem = handle->bayes->base;
    } else {
      handle->problem = load_problem(text);
    }
    *out = handle.release();
    return TM_OK;
  });
}

tm_status tm_problem_from_file(const char* path, tm_problem** out) {
  std::ifstream in(path == nullptr ? "" : path);
  if (!in) {
    last_error = std::string("cannot read '") + opt_str(path) + "'";
    if (out != nullptr) *out = nullptr;
    return TM_INPUT_ERROR;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return tm_problem_from_json(buffer.str().c_str(), out);
}

tm_status tm_problem_from_fixture(const char* name, tm_problem** out) {
  if (out != nullptr) *out = nullptr;
  return guarded(nullptr, [&] {
    if (name == nullptr) throw Error(ErrorKind::kInput, "null fixture name");
    return tm_problem_from_json(fixture_json(name).c_str(), out);
  });
}

void tm_problem_free(tm_problem* problem) { delete problem; }

tm_status tm_problem_to_json(const tm_problem* problem, char** out) {
  return guarded(out, [&] {
    *out = copy_out(save_problem(need(problem).problem));
    return TM_OK;
  });
}

int tm_problem_is_bayesian(const tm_problem* problem) {
  return problem != nullptr && problem->bayes.has_value();
}

tm_status tm_run(const tm_problem* handle, const tm_options* options,
                 char** out) {
  return guarded(out, [&] {
    const Problem& p = need(handle).problem;
    const tm_options o = defaults_of(options);
    const Selection sel = select(p, o);
    std::string label;
    const Profile reports = select_report(p, o, &label);
    json doc;
    doc["mechanism"] = sel.name;
    doc["tiers"] = sel.tiers.labels();
    doc["report"] = label;
    if (sel.mechanism == Mechanism::kDa) {
      const Matching m = run_mechanism(Mechanism::kDa, p.structure, sel.tiers,
                                       reports);
      doc["matching"] = format_matching(p, m);
      doc["assignment"] = assignment_json(p, m);
    } else {
      const TdaTrace trace =
          tiered_deferred_acceptance(p.structure, sel.tiers, reports);
      doc["matching"] = format_matching(p, trace.final);
      doc["assignment"] = assignment_json(p, trace.final);
      json rounds = json::array();
      for (const TdaRound& r : trace.rounds) {
        json round;
        round["tier"] = r.tier;
        round["schools"] = ids(p.schools, sel.tiers.schools_in(r.tier));
        round["participants"] = ids(p.students, r.participants);
        json got = json::object();
        for (StudentIndex i : r.participants) {
          got[p.students[i]] = r.matching[i] == kSelf
                                   ? json(nullptr)
                                   : json(p.schools[r.matching[i]]);
        }
        round["assignment"] = got;
        rounds.push_back(round);
      }
      doc["trace"] = rounds;
    }
    return emit(out, doc);
  });
}

tm_status tm_diagnose(const tm_problem* handle, const tm_options* options,
                      char** out) {
  return guarded(out, [&] {
    const Problem& p = need(handle).problem;
    const tm_options o = defaults_of(options);
    const Selection sel = select(p, o);
    const std::string which =
        o.matching == nullptr ? sel.name + "-truthful" : o.matching;
    Matching m;
    if (which == "sosm" || which == "da-truthful") {
      m = sosm(p.structure, p.preferences);
    } else if (which == "tda-truthful" || which == "finest-tda-truthful") {
      m = run_mechanism(Mechanism::kTda, p.structure, sel.tiers,
                        p.preferences);
    } else if (which.find('{') != std::string::npos) {
      m = parse_matching(p, which);
    } else {
      throw Error(ErrorKind::kInput,
                  "matching must be sosm, da-truthful, tda-truthful or JSON");
    }
    check_matching(p, m);
    const StabilityReport report =
        find_blocking_pairs(p.structure, m, p.preferences);
    json doc;
    doc["tiers"] = sel.tiers.labels();
    doc["matching_source"] = which.find('{') == std::string::npos ? which
                                                                  : "custom";
    doc["matching"] = format_matching(p, m);
    doc["stable"] = report.stable();
    json pairs = json::array();
    for (const auto& bp : report.blocking_pairs) {
      pairs.push_back({{"student", p.students[bp.student]},
                       {"school", p.schools[bp.school]},
                       {"kind", bp.kind == BlockKind::kWasteful
                                    ? "wasteful"
                                    : "justified-envy"}});
    }
    doc["blocking_pairs"] = pairs;
    doc["ir_violations"] = ids(p.students, report.ir_violations);
    doc["tier_stable"] =
        is_stable_wrt_tiers(p.structure, sel.tiers, m, p.preferences);
    std::vector<SchoolIndex> all(p.num_schools());
    for (int s = 0; s < p.num_schools(); ++s) all[s] = s;
    json cycles = json::array();
    for (const Cycle& c : find_cycles(p.structure, all)) {
      cycles.push_back(
          {{"schools", {p.schools[c.school_a], p.schools[c.school_b]}},
           {"students",
            {p.students[c.i], p.students[c.j], p.students[c.k]}},
           {"scarcity",
            {{p.schools[c.school_a], ids(p.students, c.scarcity_a)},
             {p.schools[c.school_b], ids(p.students, c.scarcity_b)}}},
           {"within_tier", sel.tiers.tier_of(c.school_a) ==
                               sel.tiers.tier_of(c.school_b)}});
    }
    doc["cycles"] = cycles;
    doc["within_tier_acyclic"] = is_within_tier_acyclic(p.structure, sel.tiers);
    return emit(out, doc);
  });
}

tm_status tm_equilibria(const tm_problem* handle, const tm_options* options,
                        char** out) {
  return guarded(out, [&] {
    const tm_problem& h = need(handle);
    const Problem& p = h.problem;
    const tm_options o = defaults_of(options);
    const Selection sel = select(p, o);
    const Limits limits = limits_of(o);
    json doc;
    doc["mechanism"] = sel.name;
    doc["tiers"] = sel.tiers.labels();
    if (h.bayes) {
      if (o.undominated) {
        throw Error(ErrorKind::kInput,
                    "the undominated filter applies to complete information");
      }
      BayesianProblem bp = *h.bayes;
      bp.base.tiers = sel.tiers;
      const BneReport r = enumerate_bne_outcomes(bp, sel.mechanism, limits);
      json states = json::array();
      for (const auto& st : bp.states) {
        states.push_back(format_rational(st.probability));
      }
      doc["bayesian"] = true;
      doc["state_probabilities"] = states;
      doc["equilibrium_count"] = r.equilibria.size();
      json tuples = json::array();
      for (const auto& t : r.outcome_tuples) tuples.push_back(matching_list(p, t));
      doc["outcome_tuples"] = tuples;
      doc["truthful_tuple"] = matching_list(
          p, bayes_outcomes(bp, sel.mechanism, truthful_profile(bp)));
      if (o.include_profiles) {
        json eqs = json::array();
        for (const auto& e : r.equilibria) {
          json entry;
          entry["reports"] = profile_json(p, e.reports);
          if (bp.typed_student) {
            json types = json::array();
            for (const auto& t : e.type_reports) {
              types.push_back(format_preference(p, t));
            }
            entry["type_reports"] = types;
          }
          eqs.push_back(entry);
        }
        doc["equilibria"] = eqs;
      }
      return emit(out, doc);
    }
    const EquilibriumReport r =
        o.undominated
            ? enumerate_undominated_nash_outcomes(p, sel.tiers, sel.mechanism,
                                                  limits)
            : enumerate_nash_outcomes(p, sel.tiers, sel.mechanism, limits);
    doc["undominated"] = static_cast<bool>(o.undominated);
    doc["equilibrium_count"] = r.equilibria.size();
    doc["outcomes"] = matching_list(p, r.outcomes);
    if (o.include_profiles) {
      json eqs = json::array();
      for (const auto& e : r.equilibria) {
        eqs.push_back(
            {{"reports", profile_json(p, e)},
             {"outcome",
              format_matching(p, run_mechanism(sel.mechanism, p.structure,
                                               sel.tiers, e))}});
      }
      doc["equilibria"] = eqs;
    }
    return emit(out, doc);
  });
}

tm_status tm_verify_examples(const tm_options* options, char** out) {
  return guarded(out, [&] {
    const tm_options o = defaults_of(options);
    bool all = true;
    json doc;
    doc["suite"] = "examples";
    doc["checks"] = checks_json(replay_examples(limits_of(o)), &all);
    doc["passed"] = all;
    return emit(out, doc, all ? TM_OK : TM_ASSERTION_FAILED);
  });
}

tm_status tm_verify_theorems(const tm_options* options, char** out) {
  return guarded(out, [&] {
    const tm_options o = defaults_of(options);
    TheoremOptions t;
    t.seed = o.seed;
    t.trials = o.trials;
    t.students = o.students;
    t.schools = o.schools;
    t.probe = o.probe != 0;
    t.limits = limits_of(o);
    const TheoremReport r = verify_theorems(t);
    json doc;
    doc["suite"] = "theorems";
    doc["seed"] = t.seed;
    doc["trials"] = t.trials;
    doc["students"] = t.students;
    doc["schools"] = t.schools;
    doc["passed"] = r.ok();
    json tallies = json::array();
    for (const auto& c : r.tallies) {
      tallies.push_back({{"check", c.name},
                         {"passed", c.passed},
                         {"failed", c.failed},
                         {"skipped", c.skipped}});
    }
    doc["tallies"] = tallies;
    json failures = json::array();
    for (const auto& f : r.failures) failures.push_back(json::parse(f.detail_json));
    doc["failures"] = failures;
    if (t.probe) {
      json findings = json::array();
      for (const auto& f : r.probe_findings) findings.push_back(json::parse(f));
      doc["probe"] = {{"trials", r.probe_trials}, {"findings", findings}};
    }
    return emit(out, doc, r.ok() ? TM_OK : TM_ASSERTION_FAILED);
  });
}

tm_status tm_verify_guarantee(const tm_problem* handle,
                              const tm_options* options, char** out) {
  return guarded(out, [&] {
    const Problem& p = need(handle).problem;
    const tm_options o = defaults_of(options);
    const Selection sel = select(p, o);
    if (sel.mechanism != Mechanism::kTda) {
      throw Error(ErrorKind::kInput, "the guarantee audit concerns TDA");
    }
    std::vector<SchoolIndex> protect;
    if (o.protect == nullptr) {
      protect = sel.tiers.schools_in(1);
    } else {
      for (const auto& id : split_list(o.protect)) {
        protect.push_back(p.school_index(id));
      }
    }
    const AuditResult r = guarantee_audit(p, sel.tiers, protect, limits_of(o),
                                          o.complete_only != 0);
    json doc;
    doc["suite"] = "guarantee";
    doc["tiers"] = sel.tiers.labels();
    doc["protected"] = ids(p.schools, protect);
    doc["complete_only"] = o.complete_only != 0;
    doc["true_profiles"] = r.true_profiles;
    doc["equilibria_checked"] = r.equilibria_checked;
    doc["worse"] = r.worse;
    doc["incomparable"] = r.incomparable;
    doc["passed"] = r.passed();
    if (r.first) {
      const AuditViolation& v = *r.first;
      doc["first_violation"] = {
          {"truth", profile_json(p, v.truth)},
          {"equilibrium", profile_json(p, v.equilibrium)},
          {"outcome", format_matching(p, v.outcome)},
          {"sosm", format_matching(p, v.sosm)},
          {"school", p.schools[v.school]},
          {"verdict", verdict_name(v.verdict)}};
    }
    return emit(out, doc, r.passed() ? TM_OK : TM_ASSERTION_FAILED);
  });
}

tm_status tm_verify_bayes(const tm_options* options, char** out) {
  return guarded(out, [&] {
    const tm_options o = defaults_of(options);
    const std::string only = opt_str(o.fixture);
    if (!only.empty() && !is_bayesian_fixture(only)) {
      throw Error(ErrorKind::kInput, "'" + only + "' is not a Bayesian fixture");
    }
    bool all = true;
    json doc;
    doc["suite"] = "bayes";
    doc["checks"] = checks_json(verify_bayes_fixtures(limits_of(o), only), &all);
    doc["passed"] = all;
    return emit(out, doc, all ? TM_OK : TM_ASSERTION_FAILED);
  });
}

}  // extern "C"
