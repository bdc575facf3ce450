#pragma once

#include <map>

#include "lab/scenario.hpp"

namespace lamlab::lab {

inline constexpr const char* kToolVersion = "0.1.0";

enum Phase : unsigned {
  kPhaseGeometry = 1u << 0,
  kPhaseMesh = 1u << 1,
  kPhaseSolve = 1u << 2,
  kPhaseDiagnose = 1u << 3,
  kPhaseSweep = 1u << 4,
};

struct RunManifest {
  std::string scenario_hash;
  std::string tool_version = kToolVersion;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  std::map<std::string, double> timings_sec;  // per phase
};

// Executes the requested phases (prerequisites are pulled in implicitly),
// writing mesh.json / solution.csv / decay.csv / sweep.csv / report.json
// plus a verbatim scenario copy into out_dir. Deterministic given
// (scenario, seed); refuses to reuse an existing non-empty directory
// unless force is set. Errors are recorded in report.json["errors"] and
// rethrown.
RunManifest run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                         unsigned phases, bool force = false, bool quiet = false);

// Uniform refinement study: nx, ny doubled `refine` times starting from
// the scenario's mesh. Errors against the manufactured exact solution
// when available, otherwise against the finest level. Writes
// convergence.csv and the fitted rates.
RunManifest run_convergence(const ScenarioConfig& cfg, const std::string& out_dir, int refine,
                            bool force = false, bool quiet = false);

}  // namespace lamlab::lab
