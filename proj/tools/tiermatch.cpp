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

// Command-line front end over the C interface of libtiermatch.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tiermatch/tiermatch.h"

namespace {

using json = nlohmann::ordered_json;

struct Config {
  std::string fixture;
  std::string problem_path;
  std::string mechanism = "tda";
  std::string tiers;
  std::string order;
  std::string report;
  std::string matching;
  std::string format = "text";
  std::string suite;
  std::string protect;
  std::optional<uint64_t> seed;
  int trials = 200;
  int students = 3;
  int schools = 3;
  int jobs = 1;
  int64_t guard = 0;
  bool undominated = false;
  bool profiles = false;
  bool complete = false;
  bool probe = false;
};

class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { tm_problem_free(p_); }
  tm_problem** out() { return &p_; }
  const tm_problem* get() const { return p_; }

 private:
  tm_problem* p_ = nullptr;
};

int fail(tm_status status) {
  std::cerr << "error: " << tm_last_error() << "\n";
  return static_cast<int>(status);
}

// File contents when `value` names a readable file; the value itself
// otherwise.
std::string file_or_value(const std::string& value) {
  std::error_code ec;
  if (value.empty() || !std::filesystem::is_regular_file(value, ec)) {
    return value;
  }
  std::ifstream in(value);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

tm_status load(const Config& c, Handle& h) {
  if (!c.fixture.empty() && !c.problem_path.empty()) {
    std::cerr << "error: give either --fixture or --problem, not both\n";
    return TM_INPUT_ERROR;
  }
  if (!c.fixture.empty()) {
    return tm_problem_from_fixture(c.fixture.c_str(), h.out());
  }
  if (!c.problem_path.empty()) {
    return tm_problem_from_file(c.problem_path.c_str(), h.out());
  }
  std::cerr << "error: a problem is required (--fixture NAME or --problem FILE)\n";
  return TM_INPUT_ERROR;
}

const char* maybe(const std::string& s) {
  return s.empty() ? nullptr : s.c_str();
}

void print_text(const std::string& command, const json& d) {
  auto line = [](const std::string& k, const json& v) {
    std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
              << "\n";
  };
  if (command == "run") {
    line("mechanism", d["mechanism"]);
    line("tiers", d["tiers"]);
    line("report", d["report"]);
    if (d.contains("trace")) {
      for (const auto& r : d["trace"]) {
        std::cout << "round " << r["tier"].get<int>() << " schools "
                  << r["schools"].dump() << " participants "
                  << r["participants"].dump() << " -> "
                  << r["assignment"].dump() << "\n";
      }
    }
    line("matching", d["matching"]);
  } else if (command == "diagnose") {
    line("matching", d["matching"]);
    line("stable", d["stable"]);
    for (const auto& bp : d["blocking_pairs"]) {
      std::cout << "  blocking pair (" << bp["student"].get<std::string>()
                << "," << bp["school"].get<std::string>() << ") "
                << bp["kind"].get<std::string>() << "\n";
    }
    if (!d["ir_violations"].empty()) line("ir violations", d["ir_violations"]);
    line("tier-stable", d["tier_stable"]);
    line("tiers", d["tiers"]);
    for (const auto& cy : d["cycles"]) {
      std::cout << "  cycle schools " << cy["schools"].dump() << " students "
                << cy["students"].dump() << " scarcity "
                << cy["scarcity"].dump()
                << (cy["within_tier"].get<bool>() ? " (within tier)" : "")
                << "\n";
    }
    line("within-tier acyclic", d["within_tier_acyclic"]);
  } else if (command == "equilibria") {
    line("mechanism", d["mechanism"]);
    line("tiers", d["tiers"]);
    line("equilibria", d["equilibrium_count"]);
    if (d.contains("outcome_tuples")) {
      line("state probabilities", d["state_probabilities"]);
      std::cout << d["outcome_tuples"].size() << " outcome tuple(s)\n";
      for (const auto& t : d["outcome_tuples"]) std::cout << "  " << t.dump() << "\n";
      line("truthful tuple", d["truthful_tuple"]);
    } else {
      if (d["undominated"].get<bool>()) std::cout << "undominated only\n";
      std::cout << d["outcomes"].size() << " outcome(s)\n";
      for (const auto& o : d["outcomes"]) {
        std::cout << "  " << o.get<std::string>() << "\n";
      }
    }
    if (d.contains("equilibria")) {
      for (const auto& e : d["equilibria"]) std::cout << "  " << e.dump() << "\n";
    }
  } else {
    const std::string suite = d["suite"].get<std::string>();
    if (d.contains("checks")) {
      for (const auto& c : d["checks"]) {
        const bool ok = c["passed"].get<bool>();
        std::cout << (ok ? "PASS " : "FAIL ") << c["group"].get<std::string>()
                  << "/" << c["name"].get<std::string>();
        if (!ok) {
          std::cout << " expected " << c["expected"].get<std::string>()
                    << " got " << c["actual"].get<std::string>();
        }
        std::cout << "\n";
      }
    } else if (suite == "theorems") {
      for (const auto& t : d["tallies"]) {
        std::cout << t["check"].get<std::string>() << ": "
                  << t["passed"].get<int64_t>() << " passed, "
                  << t["failed"].get<int64_t>() << " failed, "
                  << t["skipped"].get<int64_t>() << " skipped\n";
      }
      for (const auto& f : d["failures"]) std::cout << "counterexample " << f.dump() << "\n";
      if (d.contains("probe")) {
        std::cout << "probe: " << d["probe"]["findings"].size()
                  << " re-ranking(s) changed the outcome set in "
                  << d["probe"]["trials"].get<int64_t>() << " trials\n";
        for (const auto& f : d["probe"]["findings"]) std::cout << "  " << f.dump() << "\n";
      }
    } else {
      line("tiers", d["tiers"]);
      line("protected", d["protected"]);
      line("true profiles", d["true_profiles"]);
      line("equilibria checked", d["equilibria_checked"]);
      line("worse", d["worse"]);
      line("incomparable", d["incomparable"]);
      if (d.contains("first_violation")) {
        std::cout << "first violation " << d["first_violation"].dump() << "\n";
      }
    }
    std::cout << suite << ": " << (d["passed"].get<bool>() ? "pass" : "FAIL")
              << "\n";
  }
}

int finish(const std::string& command, const Config& c, tm_status status,
           char* const& out) {
  if (out == nullptr) return fail(status);
  const std::string text = out;
  tm_free_string(out);
  if (c.format == "json") {
    std::cout << text << "\n";
  } else {
    print_text(command, json::parse(text));
  }
  return static_cast<int>(status);
}

tm_options options_of(const Config& c, const std::string& report,
                      const std::string& matching) {
  tm_options o;
  tm_options_init(&o);
  o.mechanism = c.mechanism.c_str();
  o.tiers = maybe(c.tiers);
  o.order = maybe(c.order);
  o.report = maybe(report);
  o.matching = maybe(matching);
  o.undominated = c.undominated;
  o.include_profiles = c.profiles;
  o.seed = c.seed.value_or(42);
  o.trials = c.trials;
  o.students = c.students;
  o.schools = c.schools;
  o.probe = c.probe;
  o.protect = maybe(c.protect);
  o.complete_only = c.complete;
  o.fixture = maybe(c.fixture);
  o.jobs = c.jobs;
  o.profile_guard = c.guard;
  return o;
}

void add_problem_flags(CLI::App* sub, Config& c) {
  sub->add_option("--fixture", c.fixture, "built-in fixture name");
  sub->add_option("--problem", c.problem_path, "scenario JSON file");
  sub->add_option("--mechanism", c.mechanism, "da, tda or finest-tda")
      ->check(CLI::IsMember({"da", "tda", "finest-tda"}));
  sub->add_option("--tiers", c.tiers, "tier labels in school order, e.g. 1,2,2");
  sub->add_option("--order", c.order, "school order for finest-tda, e.g. a,b,c");
}

void add_common_flags(CLI::App* sub, Config& c) {
  sub->add_option("--format", c.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--guard", c.guard,
                  "profile-count guard (default 1e6 or TIERMATCH_GUARD_PROFILES)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tiered deferred acceptance: mechanisms, equilibria, audits"};
  app.set_version_flag("--version", std::string(tm_version()));
  app.require_subcommand(1);
  Config c;

  auto* run = app.add_subcommand("run", "run a mechanism on a problem");
  add_problem_flags(run, c);
  add_common_flags(run, c);
  run->add_option("--report", c.report,
                  "named report of the problem or a profile JSON file");

  auto* diagnose = app.add_subcommand(
      "diagnose", "blocking pairs, tier stability and priority cycles");
  add_problem_flags(diagnose, c);
  add_common_flags(diagnose, c);
  diagnose->add_option(
      "--matching", c.matching,
      "sosm, da-truthful, tda-truthful or a matching JSON file");

  auto* equilibria =
      app.add_subcommand("equilibria", "enumerate pure (Bayes-)Nash equilibria");
  add_problem_flags(equilibria, c);
  add_common_flags(equilibria, c);
  equilibria->add_flag("--undominated", c.undominated,
                       "keep equilibria without weakly dominated strategies");
  equilibria->add_flag("--profiles", c.profiles, "list equilibrium profiles");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_problem_flags(verify, c);
  add_common_flags(verify, c);
  verify->add_option("--suite", c.suite, "theorems, guarantee, bayes or examples")
      ->required()
      ->check(CLI::IsMember({"theorems", "guarantee", "bayes", "examples"}));
  verify->add_option("--seed", c.seed, "random seed (theorems)");
  verify->add_option("--trials", c.trials, "random instances (theorems)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--students", c.students, "students per instance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--schools", c.schools, "schools per instance")
      ->check(CLI::PositiveNumber);
  verify->add_option("--protect", c.protect,
                     "protected schools, comma separated (guarantee)");
  verify->add_flag("--complete", c.complete,
                   "audit complete true preferences only (guarantee)");
  verify->add_flag("--probe", c.probe,
                   "also re-rank tiers and report outcome changes (theorems)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(TM_INPUT_ERROR);
  }

  char* out = nullptr;
  if (verify->parsed()) {
    const tm_options o = options_of(c, "", "");
    if (c.suite == "examples") {
      return finish("verify", c, tm_verify_examples(&o, &out), out);
    }
    if (c.suite == "bayes") {
      return finish("verify", c, tm_verify_bayes(&o, &out), out);
    }
    if (c.suite == "theorems") {
      if (!c.seed) {
        std::cerr << "error: --seed is required for the theorems suite\n";
        return TM_INPUT_ERROR;
      }
      return finish("verify", c, tm_verify_theorems(&o, &out), out);
    }
    Handle h;
    if (const tm_status s = load(c, h); s != TM_OK) {
      return h.get() == nullptr && *tm_last_error() ? fail(s) : s;
    }
    return finish("verify", c, tm_verify_guarantee(h.get(), &o, &out), out);
  }

  Handle h;
  if (const tm_status s = load(c, h); s != TM_OK) {
    return *tm_last_error() ? fail(s) : s;
  }
  if (run->parsed()) {
    const std::string report = file_or_value(c.report);
    const tm_options o = options_of(c, report, "");
    return finish("run", c, tm_run(h.get(), &o, &out), out);
  }
  if (diagnose->parsed()) {
    const std::string matching = file_or_value(c.matching);
    const tm_options o = options_of(c, "", matching);
    return finish("diagnose", c, tm_diagnose(h.get(), &o, &out), out);
  }
  const tm_options o = options_of(c, "", "");
  return finish("equilibria", c, tm_equilibria(h.get(), &o, &out), out);
}
