// Exercises the shared-library surface end to end.
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "lamlab/lamlab.h"

namespace fs = std::filesystem;

static int failures = 0;

#define EXPECT(cond)                                                        \
  do {                                                                      \
    if (!(cond)) {                                                          \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                           \
    }                                                                       \
  } while (0)

static const char* kScenario = R"(
mode = "elliptic"
[[interfaces]]
preset = "flat"
c = 0.0
[coefficients]
values = [1.0, 2.0]
[mesh]
nx = 16
ny = 4
)";

int main() {
  EXPECT(std::strlen(lamlab_version()) > 0);

  lamlab_scenario* scenario = nullptr;
  EXPECT(lamlab_scenario_load_string(kScenario, &scenario) == LAMLAB_OK);
  EXPECT(scenario != nullptr);
  EXPECT(std::strlen(lamlab_scenario_hash(scenario)) > 0);
  EXPECT(lamlab_scenario_set_seed(scenario, 42) == LAMLAB_OK);

  const fs::path dir = fs::temp_directory_path() / "lamlab_capi_test";
  fs::remove_all(dir);
  EXPECT(lamlab_run(scenario, dir.string().c_str(), LAMLAB_PHASE_SOLVE, 0, 1) == LAMLAB_OK);
  EXPECT(fs::exists(dir / "solution.csv"));
  EXPECT(fs::exists(dir / "report.json"));

  // refusing to reuse the directory is a validation error with a message
  EXPECT(lamlab_run(scenario, dir.string().c_str(), LAMLAB_PHASE_SOLVE, 0, 1) ==
         LAMLAB_ERR_VALIDATION);
  EXPECT(std::strlen(lamlab_last_error()) > 0);
  EXPECT(lamlab_run(scenario, dir.string().c_str(), LAMLAB_PHASE_SOLVE, 1, 1) == LAMLAB_OK);

  // broken scenarios surface as validation errors
  lamlab_scenario* bad = nullptr;
  EXPECT(lamlab_scenario_load_string("mode = \"elliptic\"\n", &bad) == LAMLAB_ERR_VALIDATION);
  EXPECT(bad == nullptr);
  EXPECT(lamlab_scenario_load("/nonexistent/path.toml", &bad) == LAMLAB_ERR_VALIDATION);

  lamlab_scenario_free(scenario);
  fs::remove_all(dir);

  if (failures == 0) std::printf("capi_tests: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
