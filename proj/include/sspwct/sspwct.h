/*
 * Copyright 2026 The SSPwCT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of the sspwct library.
 *
 * Every document crossing the boundary is UTF-8 JSON. Strings returned
 * through `char** out` are owned by the caller and released with
 * sspwct_string_free. On a non-OK status `*out` is left NULL and
 * sspwct_last_error() describes the failure (per thread).
 */

#ifndef SSPWCT_SSPWCT_H_
#define SSPWCT_SSPWCT_H_

#include <stddef.h>

#if defined(_WIN32)
#if defined(SSPWCT_BUILDING)
#define SSPWCT_API __declspec(dllexport)
#else
#define SSPWCT_API __declspec(dllimport)
#endif
#else
#define SSPWCT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sspwct_status {
  SSPWCT_OK = 0,
  SSPWCT_PARSE = 1,
  SSPWCT_VALIDATION = 2,
  SSPWCT_INVALID_ARGUMENT = 3,
  SSPWCT_FOREIGN_CONTRACT = 4,
  SSPWCT_INSTANCE_TOO_LARGE = 5,
  SSPWCT_ALREADY_FLEXIBLE = 6,
  SSPWCT_PRECONDITION_UNMET = 7,
  SSPWCT_CONDITION_VIOLATION = 8,
  SSPWCT_INTERNAL = 99
} sspwct_status;

/* Parsed market. Immutable once created; safe to share between threads. */
typedef struct sspwct_instance sspwct_instance;

SSPWCT_API const char* sspwct_version(void);
/* Message of the last failure on the calling thread, "" if none. */
SSPWCT_API const char* sspwct_last_error(void);
SSPWCT_API const char* sspwct_status_name(sspwct_status status);
SSPWCT_API void sspwct_string_free(char* s);

/* Schema-checked parse. Invariant violations do not fail here; they are
 * reported by sspwct_instance_validate and by every operation that needs a
 * well-formed market (SSPWCT_VALIDATION). */
SSPWCT_API sspwct_status sspwct_instance_parse(const char* text, size_t len,
                                               sspwct_instance** out);
/* Random valid instance; `config_json` may be NULL for defaults. */
SSPWCT_API sspwct_status sspwct_instance_generate(const char* config_json,
                                                  sspwct_instance** out);
SSPWCT_API void sspwct_instance_free(sspwct_instance* instance);

/* Canonical text: sorted keys, two-space indent, trailing newline. */
SSPWCT_API sspwct_status sspwct_instance_serialize(
    const sspwct_instance* instance, char** out);
/* {"valid": bool, "violations": [{"code", "message"}]}. */
SSPWCT_API sspwct_status sspwct_instance_validate(
    const sspwct_instance* instance, char** out, int* valid);

/* ["o1", "e1", ...] for one branch. */
SSPWCT_API sspwct_status sspwct_slot_sequence(const sspwct_instance* instance,
                                              const char* branch, char** out);
/* `offers_json` is an array of contract ids of `branch`. Returns
 * {"chosen": [ids], "per_slot": [{"slot", "state", "contract"}],
 *  "filled": {"o1": 0|1, ...}}. */
SSPWCT_API sspwct_status sspwct_choose(const sspwct_instance* instance,
                                       const char* branch,
                                       const char* offers_json, int completion,
                                       char** out);

/* Cumulative offer process. Options (all optional):
 * {"policy": "lex" | "random", "seed": u64, "trace": bool}.
 * Returns {"outcome": {"assignment": [ids]}, "trace": {...}}. */
SSPWCT_API sspwct_status sspwct_run(const sspwct_instance* instance,
                                    const char* options_json, char** out);
/* Stability of an outcome ({"assignment": [...]} or a run result). */
SSPWCT_API sspwct_status sspwct_verify(const sspwct_instance* instance,
                                       const char* outcome_json, char** out,
                                       int* stable);
/* Property suites over a batch. Options: {"suites": [names], "trials",
 * "order_seeds", "seed", "jobs", "choice_bound", "blocking_bound",
 * "misreport_bound"}. */
SSPWCT_API sspwct_status sspwct_oracle(const sspwct_instance* const* instances,
                                       size_t count, const char* options_json,
                                       char** out, int* all_passed);
/* Comparative-statics experiment; `violated` is set when a protected agent
 * loses or the improvement chain disagrees with the direct run. */
SSPWCT_API sspwct_status sspwct_experiment(const sspwct_instance* instance,
                                           const char* params_json, char** out,
                                           int* violated);

#ifdef __cplusplus
}
#endif

#endif /* SSPWCT_SSPWCT_H_ */
