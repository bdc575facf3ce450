/* lamlab — layered-media transmission laboratory, C API.
 *
 * A scenario is loaded from a TOML file into an opaque handle, then
 * executed phase by phase into an output directory. All functions return
 * a status code; lamlab_last_error() describes the most recent failure on
 * the calling thread.
 */
#ifndef LAMLAB_H
#define LAMLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define LAMLAB_API __declspec(dllexport)
#else
#define LAMLAB_API __attribute__((visibility("default")))
#endif

typedef struct lamlab_scenario lamlab_scenario;

typedef enum lamlab_status {
  LAMLAB_OK = 0,
  LAMLAB_ERR_VALIDATION = 2, /* bad scenario, bad arguments, I/O refusal */
  LAMLAB_ERR_NUMERIC = 3,    /* solver or diagnostic failure */
  LAMLAB_ERR_INTERNAL = 4
} lamlab_status;

typedef enum lamlab_phase {
  LAMLAB_PHASE_GEOMETRY = 1,
  LAMLAB_PHASE_MESH = 2,
  LAMLAB_PHASE_SOLVE = 4,
  LAMLAB_PHASE_DIAGNOSE = 8,
  LAMLAB_PHASE_SWEEP = 16
} lamlab_phase;

LAMLAB_API const char* lamlab_version(void);

/* Message for the last failing call on this thread; empty string if none. */
LAMLAB_API const char* lamlab_last_error(void);

LAMLAB_API lamlab_status lamlab_scenario_load(const char* path, lamlab_scenario** out);
LAMLAB_API lamlab_status lamlab_scenario_load_string(const char* text, lamlab_scenario** out);
LAMLAB_API void lamlab_scenario_free(lamlab_scenario* scenario);

/* Content digest of the validated scenario (hex), owned by the handle. */
LAMLAB_API const char* lamlab_scenario_hash(const lamlab_scenario* scenario);
LAMLAB_API lamlab_status lamlab_scenario_set_seed(lamlab_scenario* scenario, uint64_t seed);

/* Runs the given phase mask; prerequisite phases are pulled in
 * automatically. Outputs land in out_dir (refused if non-empty unless
 * force). */
LAMLAB_API lamlab_status lamlab_run(const lamlab_scenario* scenario, const char* out_dir,
                                    unsigned phases, int force, int quiet);

/* Mesh-refinement study with `refine` uniform doublings (>= 2). */
LAMLAB_API lamlab_status lamlab_run_convergence(const lamlab_scenario* scenario,
                                                const char* out_dir, int refine, int force,
                                                int quiet);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LAMLAB_H */
