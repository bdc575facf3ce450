// lamlab command-line front end. Talks to the core exclusively through
// the shared-library C API.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "lamlab/lamlab.h"

namespace {

struct CommonArgs {
  std::string scenario;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool have_seed = false;
  bool force = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario, "scenario TOML file")->required();
  cmd->add_option("--out", args.out_dir, "output directory")->required();
  cmd->add_option("--seed", args.seed, "override the scenario seed")
      ->each([&args](const std::string&) { args.have_seed = true; });
  cmd->add_flag("--force", args.force, "reuse a non-empty output directory");
  cmd->add_flag("--quiet", args.quiet, "suppress progress messages");
}

int run_phases(const CommonArgs& args, unsigned phases, int refine) {
  lamlab_scenario* scenario = nullptr;
  lamlab_status st = lamlab_scenario_load(args.scenario.c_str(), &scenario);
  if (st != LAMLAB_OK) {
    std::fprintf(stderr, "lamlab: %s\n", lamlab_last_error());
    return static_cast<int>(st);
  }
  if (args.have_seed) lamlab_scenario_set_seed(scenario, args.seed);
  if (refine > 0)
    st = lamlab_run_convergence(scenario, args.out_dir.c_str(), refine, args.force ? 1 : 0,
                                args.quiet ? 1 : 0);
  else
    st = lamlab_run(scenario, args.out_dir.c_str(), phases, args.force ? 1 : 0,
                    args.quiet ? 1 : 0);
  if (st != LAMLAB_OK) std::fprintf(stderr, "lamlab: %s\n", lamlab_last_error());
  if (st == LAMLAB_OK && !args.quiet)
    std::fprintf(stderr, "[lamlab] done, scenario %s -> %s\n",
                 lamlab_scenario_hash(scenario), args.out_dir.c_str());
  lamlab_scenario_free(scenario);
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lamlab — transmission problems on layered composite domains"};
  app.set_version_flag("--version", lamlab_version());
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    unsigned phases;
  };
  const Sub subs[] = {
      {"verify-geometry", "frame-field self-tests for the scenario stack",
       LAMLAB_PHASE_GEOMETRY},
      {"mesh", "build the interface-fitted mesh", LAMLAB_PHASE_MESH},
      {"solve", "mesh and solve the transmission problem",
       LAMLAB_PHASE_MESH | LAMLAB_PHASE_SOLVE},
      {"diagnose", "solve plus regularity diagnostics",
       LAMLAB_PHASE_MESH | LAMLAB_PHASE_SOLVE | LAMLAB_PHASE_DIAGNOSE},
      {"sweep", "gap sweep over the nearly-touching family", LAMLAB_PHASE_SWEEP},
  };

  CommonArgs args[6];
  int which = -1;
  int idx = 0;
  for (const Sub& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, args[idx]);
    cmd->callback([&which, idx] { which = idx; });
    ++idx;
  }
  int refine = 3;
  CLI::App* conv = app.add_subcommand("convergence", "uniform mesh-refinement study");
  add_common(conv, args[5]);
  conv->add_option("--refine", refine, "number of refinement levels (>= 2)");
  conv->callback([&which] { which = 5; });

  CLI11_PARSE(app, argc, argv);

  if (which < 0) return 2;
  if (which == 5) return run_phases(args[5], 0, refine);
  return run_phases(args[which], subs[which].phases, 0);
}
