#include "lamlab/lamlab.h"

#include <string>

#include "lab/run.hpp"

using lamlab::lab::ScenarioConfig;

struct lamlab_scenario {
  ScenarioConfig cfg;
};

namespace {

thread_local std::string g_last_error;

lamlab_status to_status(const std::exception& err) {
  g_last_error = err.what();
  if (dynamic_cast<const lamlab::NumericError*>(&err)) return LAMLAB_ERR_NUMERIC;
  if (dynamic_cast<const lamlab::ValidationError*>(&err)) return LAMLAB_ERR_VALIDATION;
  if (dynamic_cast<const lamlab::IoError*>(&err)) return LAMLAB_ERR_VALIDATION;
  return LAMLAB_ERR_INTERNAL;
}

template <class Fn>
lamlab_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return LAMLAB_OK;
  } catch (const std::exception& err) {
    return to_status(err);
  } catch (...) {
    g_last_error = "unknown error";
    return LAMLAB_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* lamlab_version(void) { return lamlab::lab::kToolVersion; }

const char* lamlab_last_error(void) { return g_last_error.c_str(); }

lamlab_status lamlab_scenario_load(const char* path, lamlab_scenario** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return LAMLAB_ERR_VALIDATION;
  }
  return guarded([&] { *out = new lamlab_scenario{lamlab::lab::load_scenario(path)}; });
}

lamlab_status lamlab_scenario_load_string(const char* text, lamlab_scenario** out) {
  if (!text || !out) {
    g_last_error = "null argument";
    return LAMLAB_ERR_VALIDATION;
  }
  return guarded([&] { *out = new lamlab_scenario{lamlab::lab::load_scenario_text(text)}; });
}

void lamlab_scenario_free(lamlab_scenario* scenario) { delete scenario; }

const char* lamlab_scenario_hash(const lamlab_scenario* scenario) {
  return scenario ? scenario->cfg.hash_hex.c_str() : "";
}

lamlab_status lamlab_scenario_set_seed(lamlab_scenario* scenario, uint64_t seed) {
  if (!scenario) {
    g_last_error = "null scenario";
    return LAMLAB_ERR_VALIDATION;
  }
  scenario->cfg.seed = seed;
  return LAMLAB_OK;
}

lamlab_status lamlab_run(const lamlab_scenario* scenario, const char* out_dir, unsigned phases,
                         int force, int quiet) {
  if (!scenario || !out_dir) {
    g_last_error = "null argument";
    return LAMLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    lamlab::lab::run_scenario(scenario->cfg, out_dir, phases, force != 0, quiet != 0);
  });
}

lamlab_status lamlab_run_convergence(const lamlab_scenario* scenario, const char* out_dir,
                                     int refine, int force, int quiet) {
  if (!scenario || !out_dir) {
    g_last_error = "null argument";
    return LAMLAB_ERR_VALIDATION;
  }
  return guarded([&] {
    lamlab::lab::run_convergence(scenario->cfg, out_dir, refine, force != 0, quiet != 0);
  });
}

}  // extern "C"
