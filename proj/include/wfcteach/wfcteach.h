/* Copyright 2026 The wfcteach Authors
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

/* C interface of libwfcteach.
 *
 * All functions return a wt_status. On failure, wt_last_error() returns a
 * message describing the most recent failure on the calling thread. Strings
 * returned through out-parameters are owned by the caller and released with
 * wt_string_free().
 */

#ifndef WFCTEACH_WFCTEACH_H_
#define WFCTEACH_WFCTEACH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(WFCTEACH_BUILDING_LIBRARY)
#define WT_API __declspec(dllexport)
#else
#define WT_API __declspec(dllimport)
#endif
#else
#define WT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wt_status {
  WT_OK = 0,
  WT_E_ARGUMENT = 1,   /* null pointer or malformed argument */
  WT_E_FORMAT = 2,     /* undecodable or malformed input */
  WT_E_UNKNOWN_TILE = 3,
  WT_E_CONFIG = 4,
  WT_E_BOUNDS = 5,
  WT_E_SIZE = 6,
  WT_E_TRAINING = 7,   /* no trained model */
  WT_E_STALE = 8,
  WT_E_NOT_FOUND = 9,
  WT_E_CONFLICT = 10,
  WT_E_IO = 11,
  WT_E_INTERNAL = 12
} wt_status;

typedef enum wt_label { WT_POSITIVE = 0, WT_NEGATIVE = 1 } wt_label;

typedef enum wt_strategy {
  WT_STRATEGY_MGG = 0,
  WT_STRATEGY_LGG = 1,
  WT_STRATEGY_MGG_MINUS_NEGATIVES = 2
} wt_strategy;

enum {
  WT_SYMMETRY_REFLECTIONS = 1,
  WT_SYMMETRY_ROTATIONS = 2
};

typedef struct wt_session wt_session;
typedef struct wt_portfolio wt_portfolio;

typedef struct wt_train_options {
  int n;              /* pattern size */
  int wrap_input;     /* nonzero: examples wrap toroidally */
  int symmetry;       /* WT_SYMMETRY_* flags */
  wt_strategy strategy;
} wt_train_options;

typedef struct wt_train_report {
  int iteration;
  size_t patterns;
  size_t legal;
  size_t observed;
  size_t negative;
  size_t valid;
  size_t starved;
  char digest[65];    /* hex SHA-256 of the validity export */
} wt_train_report;

typedef struct wt_generate_options {
  int count;
  uint64_t seed;
  int width;
  int height;
  int wrap;           /* nonzero: output wraps toroidally */
  int max_restarts;
} wt_generate_options;

typedef struct wt_sample_info {
  const char* id;     /* valid while the portfolio lives */
  uint64_t seed;
  int solved;
  int failing_x;      /* -1 when solved */
  int failing_y;
  int restarts;
  int64_t observations;
  int64_t propagations;
  double wall_ms;
} wt_sample_info;

WT_API const char* wt_version(void);
WT_API const char* wt_last_error(void);
WT_API const char* wt_status_name(wt_status status);
WT_API void wt_string_free(char* s);

WT_API void wt_train_options_default(wt_train_options* options);
WT_API void wt_generate_options_default(wt_generate_options* options);

WT_API wt_status wt_session_init(const char* dir, wt_session** out);
WT_API wt_status wt_session_open(const char* dir, wt_session** out);
WT_API void wt_session_close(wt_session* session);

/* Returns the session manifest (session.json). */
WT_API wt_status wt_session_describe(const wt_session* session, char** out_json);
WT_API wt_status wt_session_pattern_options(const wt_session* session,
                                            wt_train_options* out);

WT_API wt_status wt_session_add_example_file(wt_session* session, const char* path,
                                             wt_label label, char** out_id);
/* `sample` is a work-sample id or an image path. */
WT_API wt_status wt_session_crop_example(wt_session* session, const char* sample, int x,
                                         int y, int w, int h, wt_label label,
                                         char** out_id);
WT_API wt_status wt_session_remove_example(wt_session* session, const char* id);

WT_API wt_status wt_session_train(wt_session* session, const wt_train_options* options,
                                  wt_train_report* report);

WT_API wt_status wt_session_generate(wt_session* session,
                                     const wt_generate_options* options,
                                     wt_portfolio** out);
WT_API size_t wt_portfolio_size(const wt_portfolio* portfolio);
WT_API wt_status wt_portfolio_sample(const wt_portfolio* portfolio, size_t index,
                                     wt_sample_info* out);
WT_API void wt_portfolio_free(wt_portfolio* portfolio);

/* Path of a rendered work sample. */
WT_API wt_status wt_session_sample_path(const wt_session* session, const char* id,
                                        char** out_path);

/* Canonical validity export of a training iteration (1-based). */
WT_API wt_status wt_session_validity_export(const wt_session* session, int iteration,
                                            char** out_json);

/* Each reference is an iteration number or a path to a validity export. */
WT_API wt_status wt_session_diff(const wt_session* session, const char* a, const char* b,
                                 char** out_text);
WT_API wt_status wt_validity_diff_files(const char* a_path, const char* b_path,
                                        char** out_text);

/* Serves the HTTP API for sessions under `root` until the process ends.
 * Port 0 picks a free port; `on_bound` (nullable) receives the port. */
WT_API wt_status wt_serve(const char* root, const char* host, int port,
                          void (*on_bound)(int port, void* user), void* user);

#ifdef __cplusplus
}
#endif

#endif /* WFCTEACH_WFCTEACH_H_ */
