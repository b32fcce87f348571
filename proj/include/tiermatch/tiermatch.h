/* Copyright 2026 The tiermatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libtiermatch.
 *
 * Problems live behind opaque handles. Every command writes a JSON document
 * into a library-allocated string that the caller releases with
 * tm_free_string(). On error the output pointer is set to NULL and
 * tm_last_error() describes the failure (per calling thread).
 */

#ifndef TIERMATCH_TIERMATCH_H_
#define TIERMATCH_TIERMATCH_H_

#include <stdint.h>

#if defined(_WIN32)
#define TM_API __declspec(dllexport)
#else
#define TM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tm_status {
  TM_OK = 0,
  TM_ASSERTION_FAILED = 1, /* a verification ran and found a failure */
  TM_INPUT_ERROR = 2,
  TM_GUARD_EXCEEDED = 3
} tm_status;

typedef struct tm_problem tm_problem;

typedef struct tm_options {
  /* "da", "tda" or "finest-tda"; NULL means "tda". */
  const char* mechanism;
  /* Tier override in school order, e.g. "1,2,2"; NULL keeps the problem's. */
  const char* tiers;
  /* School order for finest-tda, e.g. "a,b,c"; NULL uses the school list. */
  const char* order;
  /* A named report of the problem ("Q") or profile JSON text; NULL means
   * the true preferences. */
  const char* report;
  /* Matching to diagnose: "sosm", "da-truthful", "tda-truthful" or matching
   * JSON text; NULL means the selected mechanism at the true preferences. */
  const char* matching;
  int undominated;      /* equilibria: keep undominated ones only */
  int include_profiles; /* equilibria: list every equilibrium profile */
  uint64_t seed;
  int trials;
  int students;
  int schools;
  int probe;          /* theorems: also compare tier re-rankings */
  const char* protect;   /* guarantee: comma-separated school ids */
  int complete_only;  /* guarantee: skip true profiles with unacceptable schools */
  const char* fixture;   /* bayes: restrict to one fixture name */
  int jobs;              /* worker threads; values below 1 mean 1 */
  int64_t profile_guard; /* 0 means default (or TIERMATCH_GUARD_PROFILES) */
} tm_options;

TM_API void tm_options_init(tm_options* options);

TM_API const char* tm_version(void);
TM_API const char* tm_last_error(void);
TM_API void tm_free_string(char* s);

/* JSON array of built-in fixture names. */
TM_API tm_status tm_fixture_names(char** out_json);

TM_API tm_status tm_problem_from_json(const char* json_text, tm_problem** out);
TM_API tm_status tm_problem_from_file(const char* path, tm_problem** out);
TM_API tm_status tm_problem_from_fixture(const char* name, tm_problem** out);
TM_API void tm_problem_free(tm_problem* problem);
/* Scenario JSON of the complete-information part. */
TM_API tm_status tm_problem_to_json(const tm_problem* problem, char** out_json);
TM_API int tm_problem_is_bayesian(const tm_problem* problem);

TM_API tm_status tm_run(const tm_problem* problem, const tm_options* options,
                        char** out_json);
TM_API tm_status tm_diagnose(const tm_problem* problem,
                             const tm_options* options, char** out_json);
/* Nash equilibria, or Bayes-Nash equilibria for Bayesian problems. */
TM_API tm_status tm_equilibria(const tm_problem* problem,
                               const tm_options* options, char** out_json);

/* Verification suites: TM_ASSERTION_FAILED when a check fails, with the
 * report (including counterexamples) still written to out_json. */
TM_API tm_status tm_verify_examples(const tm_options* options,
                                    char** out_json);
TM_API tm_status tm_verify_theorems(const tm_options* options,
                                    char** out_json);
TM_API tm_status tm_verify_guarantee(const tm_problem* problem,
                                     const tm_options* options,
                                     char** out_json);
TM_API tm_status tm_verify_bayes(const tm_options* options, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* TIERMATCH_TIERMATCH_H_ */
