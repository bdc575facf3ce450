#include "lab/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "diag/sweep.hpp"
#include "geometry/selftest.hpp"
#include "json.hpp"

namespace lamlab::lab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("short write to " + path.string());
}

void check_finite(const json& node, const std::string& where) {
  if (node.is_number_float() && !std::isfinite(node.get<double>()))
    throw NumericError("report: non-finite value at " + where);
  if (node.is_object())
    for (auto it = node.begin(); it != node.end(); ++it)
      check_finite(it.value(), where + "." + it.key());
  if (node.is_array())
    for (std::size_t i = 0; i < node.size(); ++i)
      check_finite(node[i], where + "[" + std::to_string(i) + "]");
}

void prepare_out_dir(const std::string& out_dir, bool force) {
  fs::path dir(out_dir);
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir)) throw ValidationError("output path is not a directory: " + out_dir);
    if (!force && !fs::is_empty(dir))
      throw ValidationError("output directory exists and is not empty (use --force): " + out_dir);
  } else {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
  }
}

json selftest_json(const geom::SelftestMetrics& met) {
  return json{{"eps", met.eps},
              {"ortho_residual", met.ortho_residual},
              {"tangency_residual", met.tangency_residual},
              {"holder_half", met.holder_half},
              {"sup_dl", met.sup_dl},
              {"sup_dl_sqrt_gap", met.sup_dl_sqrt_gap},
              {"sup_dl_raw", met.sup_dl_raw},
              {"sup_dl_raw_sqrt_gap", met.sup_dl_raw_sqrt_gap},
              {"dll_jump", {met.dll_jump[0], met.dll_jump[1], met.dll_jump[2]}},
              {"slope_ratio", met.slope_ratio}};
}

struct PhaseTimer {
  std::map<std::string, double>& sink;
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  PhaseTimer(std::map<std::string, double>& s, std::string n) : sink(s), name(std::move(n)) {}
  ~PhaseTimer() {
    sink[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

struct ErrorMetrics {
  double l2 = 0.0;
  double energy = 0.0;
};

// L2 / H1-seminorm errors against the manufactured exact solution,
// 3-point midpoint quadrature per element.
ErrorMetrics errors_vs_exact(const solver::FieldSolution& sol,
                             const solver::ForcingModel& forcing, double t, int slab) {
  ErrorMetrics err;
  const auto& mesh = sol.mesh;
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& tri = mesh.triangles[e];
    const Point2 a = mesh.vertices[static_cast<std::size_t>(tri.v[0])];
    const Point2 b = mesh.vertices[static_cast<std::size_t>(tri.v[1])];
    const Point2 c = mesh.vertices[static_cast<std::size_t>(tri.v[2])];
    const double area = mesh.signed_area(static_cast<int>(e));
    const double w = area / 3.0;
    const auto& g = sol.element_gradient(slab, static_cast<int>(e));
    const std::array<Point2, 3> quad{{{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                                      {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                                      {0.5 * (c.x + a.x), 0.5 * (c.y + a.y)}}};
    const std::array<double, 3> ua{sol.nodal[static_cast<std::size_t>(slab)][static_cast<std::size_t>(tri.v[0])],
                                   sol.nodal[static_cast<std::size_t>(slab)][static_cast<std::size_t>(tri.v[1])],
                                   sol.nodal[static_cast<std::size_t>(slab)][static_cast<std::size_t>(tri.v[2])]};
    // P1 values at edge midpoints
    const std::array<double, 3> uh{0.5 * (ua[0] + ua[1]), 0.5 * (ua[1] + ua[2]),
                                   0.5 * (ua[2] + ua[0])};
    for (int q = 0; q < 3; ++q) {
      const double ue = forcing.exact(tri.region, t, quad[static_cast<std::size_t>(q)]);
      const auto ge = forcing.exact_gradient(tri.region, t, quad[static_cast<std::size_t>(q)]);
      err.l2 += w * (uh[static_cast<std::size_t>(q)] - ue) * (uh[static_cast<std::size_t>(q)] - ue);
      err.energy += w * ((g[0] - ge[0]) * (g[0] - ge[0]) + (g[1] - ge[1]) * (g[1] - ge[1]));
    }
  }
  err.l2 = std::sqrt(err.l2);
  err.energy = std::sqrt(err.energy);
  return err;
}

// same quadrature, reference values interpolated from a finer solution
ErrorMetrics errors_vs_reference(const solver::FieldSolution& sol,
                                 const solver::FieldSolution& ref, int slab) {
  ErrorMetrics err;
  const auto& mesh = sol.mesh;
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e) {
    const auto& tri = mesh.triangles[e];
    const Point2 a = mesh.vertices[static_cast<std::size_t>(tri.v[0])];
    const Point2 b = mesh.vertices[static_cast<std::size_t>(tri.v[1])];
    const Point2 c = mesh.vertices[static_cast<std::size_t>(tri.v[2])];
    const double area = mesh.signed_area(static_cast<int>(e));
    const double w = area / 3.0;
    const auto& g = sol.element_gradient(slab, static_cast<int>(e));
    const std::array<Point2, 3> quad{{{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                                      {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                                      {0.5 * (c.x + a.x), 0.5 * (c.y + a.y)}}};
    const auto& nodal = sol.nodal[static_cast<std::size_t>(slab)];
    const std::array<double, 3> ua{nodal[static_cast<std::size_t>(tri.v[0])],
                                   nodal[static_cast<std::size_t>(tri.v[1])],
                                   nodal[static_cast<std::size_t>(tri.v[2])]};
    const std::array<double, 3> uh{0.5 * (ua[0] + ua[1]), 0.5 * (ua[1] + ua[2]),
                                   0.5 * (ua[2] + ua[0])};
    for (int q = 0; q < 3; ++q) {
      const Point2 p = quad[static_cast<std::size_t>(q)];
      const int fe = ref.mesh.locate(p.x, p.y);
      if (fe < 0) continue;
      const double ue = ref.value(slab, p);
      const auto ge = ref.element_gradient(slab, fe);
      err.l2 += w * (uh[static_cast<std::size_t>(q)] - ue) * (uh[static_cast<std::size_t>(q)] - ue);
      err.energy += w * ((g[0] - ge[0]) * (g[0] - ge[0]) + (g[1] - ge[1]) * (g[1] - ge[1]));
    }
  }
  err.l2 = std::sqrt(err.l2);
  err.energy = std::sqrt(err.energy);
  return err;
}

double fitted_rate(const std::vector<double>& hs, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (errs[i] <= 0.0) continue;
    const double lx = std::log(hs[i]);
    const double ly = std::log(errs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

RunManifest run_scenario(const ScenarioConfig& cfg, const std::string& out_dir, unsigned phases,
                         bool force, bool quiet) {
  if (phases & kPhaseDiagnose) phases |= kPhaseSolve;
  if (phases & kPhaseSolve) phases |= kPhaseMesh;

  prepare_out_dir(out_dir, force);
  fs::path dir(out_dir);

  RunManifest manifest;
  manifest.scenario_hash = cfg.hash_hex;
  manifest.seed = cfg.seed;
  manifest.out_dir = out_dir;

  json report;
  report["version"] = kToolVersion;
  report["provenance"] = {{"scenario_hash", cfg.hash_hex},
                          {"seed", cfg.seed},
                          {"mode", cfg.parabolic() ? "parabolic" : "elliptic"},
                          {"mesh", {{"nx", cfg.mesh.nx}, {"ny", cfg.mesh.ny},
                                    {"eta_min", cfg.mesh.eta_min}}},
                          {"tool_version", kToolVersion}};
  report["errors"] = json::array();

  write_file(dir / "scenario.toml", cfg.raw_text);

  const geom::InterfaceStack stack = cfg.make_stack();
  std::optional<solver::FieldSolution> solution;

  auto log = [&](const std::string& msg) {
    if (!quiet) std::fprintf(stderr, "[lamlab] %s\n", msg.c_str());
  };

  try {
    if (phases & kPhaseGeometry) {
      PhaseTimer timer(manifest.timings_sec, "geometry");
      log("geometry self-test");
      json geo;
      geo["stack"] = selftest_json(geom::selftest_stack(stack, cfg.geometry.budget, cfg.seed));
      if (!cfg.geometry.eps_list.empty()) {
        auto rep = geom::geometry_selftest(
            [](double e) { return geom::make_neck_stack(e); }, cfg.geometry.eps_list,
            cfg.geometry.budget, cfg.seed);
        json per = json::array();
        for (const auto& met : rep.per_eps) per.push_back(selftest_json(met));
        geo["neck_family"] = per;
      }
      report["geometry"] = geo;
    }

    mesh::StripMesh grid;
    if (phases & kPhaseMesh) {
      PhaseTimer timer(manifest.timings_sec, "mesh");
      if (cfg.dimension != 2)
        throw ValidationError("mesh phase requires a 2-D scenario");
      log("mesh");
      grid = mesh::build_strip_mesh(stack, cfg.mesh, cfg.boundary);
      write_file(dir / "mesh.json", mesh::mesh_to_json(grid));
      const auto q = mesh::mesh_quality(grid);
      report["mesh"] = {{"vertices", grid.vertices.size()},
                        {"triangles", grid.triangles.size()},
                        {"interface_edges", grid.interface_edges.size()},
                        {"min_signed_area", q.min_signed_area},
                        {"max_signed_area", q.max_signed_area},
                        {"min_angle_deg", q.min_angle_deg},
                        {"max_aspect_ratio", q.max_aspect_ratio},
                        {"clamped_cells", q.clamped_cells},
                        {"strip_min_gap", q.strip_min_gap}};
    }

    if (phases & kPhaseSolve) {
      PhaseTimer timer(manifest.timings_sec, "solve");
      log("solve");
      if (cfg.parabolic())
        solution = solver::solve_parabolic(stack, cfg.coeff, cfg.forcing, cfg.time, cfg.mesh,
                                           cfg.boundary, cfg.cg_tol);
      else
        solution = solver::solve_elliptic(stack, cfg.coeff, cfg.forcing, cfg.mesh, cfg.boundary,
                                          cfg.cg_tol);
      std::string csv = "node,x,y,t,u\n";
      for (int s = 0; s < solution->slabs(); ++s)
        for (std::size_t v = 0; v < solution->mesh.vertices.size(); ++v) {
          const Point2 p = solution->mesh.vertices[v];
          const double u = solution->nodal[static_cast<std::size_t>(s)][v];
          if (!std::isfinite(u)) throw NumericError("solution contains a non-finite value");
          csv += std::to_string(v) + "," + fmt17(p.x) + "," + fmt17(p.y) + "," +
                 fmt17(solution->times[static_cast<std::size_t>(s)]) + "," + fmt17(u) + "\n";
        }
      write_file(dir / "solution.csv", csv);
      report["solver"] = {{"iterations", solution->stats.cg_iterations},
                          {"residual", solution->stats.cg_rel_residual},
                          {"weak_residual", solution->stats.weak_residual},
                          {"clamp_warnings", solution->stats.clamped_cells},
                          {"steps", solution->slabs() - 1}};
    }

    if (phases & kPhaseDiagnose) {
      PhaseTimer timer(manifest.timings_sec, "diagnose");
      log("diagnose");
      diag::DerivedFields fields(*solution, stack, cfg.coeff, cfg.forcing);

      diag::NormTableOptions nopt;
      nopt.mu_prime = std::min(0.5, cfg.diag.mu);
      nopt.delta = cfg.diag.delta;
      nopt.margin = cfg.diag.margin;
      nopt.budget = cfg.diag.budget;
      nopt.seed = cfg.seed;
      const auto table = diag::piecewise_norm_table(fields, nopt);
      json norms = json::array();
      for (const auto& row : table)
        norms.push_back({{"region", row.region},
                         {"sup_u", row.sup_u},
                         {"seminorm_du", row.seminorm_du},
                         {"sup_d2u", row.sup_d2u},
                         {"seminorm_du_time", row.seminorm_du_time}});
      report["norms"] = norms;

      const double t_probe = cfg.parabolic() ? 0.0 : 0.0;
      std::string decay_csv = "z0_t,z0_x,z0_y,r,phi\n";
      json campanato = json::array();
      for (const auto& probe : cfg.diag.probes) {
        std::vector<diag::PhiRecord> recs;
        json jrecords = json::array();
        for (double r : cfg.diag.r_list) {
          const double phi = diag::campanato_phi(
              [&fields](double t, Point2 p) { return fields.pair(t, p); }, probe[0],
              Point2{probe[1], probe[2]}, r, cfg.diag.budget, cfg.parabolic(),
              solution->times, cfg.seed);
          recs.push_back({r, phi});
          jrecords.push_back({{"r", r}, {"phi", phi}});
          decay_csv += fmt17(probe[0]) + "," + fmt17(probe[1]) + "," + fmt17(probe[2]) + "," +
                       fmt17(r) + "," + fmt17(phi) + "\n";
        }
        json jp = {{"t", probe[0]}, {"x", probe[1]}, {"y", probe[2]}, {"records", jrecords}};
        try {
          const auto fit = diag::decay_fit(recs);
          jp["exponent"] = fit.slope;
          jp["dropped_zero"] = fit.dropped_zero;
        } catch (const ValidationError&) {
          jp["exponent_unavailable"] = true;
        }
        campanato.push_back(jp);
      }
      write_file(dir / "decay.csv", decay_csv);
      report["campanato"] = {
          {"probes", campanato},
          // the oscillation pair is taken from the solved field directly:
          // tangential derivative D_{l^1} u and conormal flux
          // U = n . (A grad u - f); no corrector terms are subtracted, so
          // measured exponents carry the same-order perturbation of the
          // omitted piecewise-smooth corrections
          {"pair", "(D_l u, n.(A grad u - f)), corrector-free"},
          {"thresholds", "empirical; sampled seminorms are lower bounds"}};

      const auto flux = solver::interface_flux_jump(*solution, cfg.coeff, cfg.forcing, t_probe,
                                                    solution->slabs() - 1);
      double mean_flux = 0.0;
      for (const auto& rec : flux.edges) mean_flux += 0.5 * (rec.lower + rec.upper);
      if (!flux.edges.empty()) mean_flux /= static_cast<double>(flux.edges.size());
      report["flux"] = {{"sup_jump", flux.sup_abs_jump},
                        {"mean_conormal", mean_flux},
                        {"edges", flux.edges.size()}};
    }

    if (phases & kPhaseSweep) {
      PhaseTimer timer(manifest.timings_sec, "sweep");
      log("sweep");
      if (!cfg.sweep.enabled) throw ValidationError("sweep phase requested without [sweep]");
      diag::SweepOptions opt;
      opt.eps_list = cfg.sweep.eps_list;
      opt.a0 = cfg.sweep.a0;
      opt.mesh = cfg.mesh;
      opt.window_factor = cfg.sweep.window_factor;
      opt.phi_radii = cfg.sweep.phi_radii;
      opt.budget = cfg.diag.budget;
      opt.seed = cfg.seed;
      const auto res = diag::gap_sweep(opt);

      int max_regions = 0;
      for (const auto& row : res.rows)
        max_regions = std::max(max_regions, static_cast<int>(row.sup_d2u_region.size()));
      std::string csv = "eps,a0,sup_Du";
      for (int r = 1; r <= max_regions; ++r) csv += ",sup_D2u_region" + std::to_string(r);
      csv += ",seminorm_Du,phi_exponent\n";
      json rows = json::array();
      for (const auto& row : res.rows) {
        if (!row.error.empty()) {
          rows.push_back({{"eps", row.eps}, {"error", row.error}});
          continue;
        }
        csv += fmt17(row.eps) + "," + fmt17(row.a0) + "," + fmt17(row.sup_du);
        for (int r = 0; r < max_regions; ++r)
          csv += "," + fmt17(r < static_cast<int>(row.sup_d2u_region.size())
                                 ? row.sup_d2u_region[static_cast<std::size_t>(r)]
                                 : 0.0);
        const double sem = row.seminorm_du_region.empty()
                               ? 0.0
                               : *std::max_element(row.seminorm_du_region.begin(),
                                                   row.seminorm_du_region.end());
        csv += "," + fmt17(sem) + "," + fmt17(row.phi_exponent) + "\n";
        rows.push_back({{"eps", row.eps},
                        {"a0", row.a0},
                        {"sup_du", row.sup_du},
                        {"sup_d2u_region", row.sup_d2u_region},
                        {"seminorm_du_region", row.seminorm_du_region},
                        {"phi_exponent", row.phi_exponent},
                        {"cg_iterations", row.cg_iterations}});
      }
      write_file(dir / "sweep.csv", csv);
      report["sweep"] = {{"rows", rows}, {"p1_sup_du", res.p1}, {"p2_sup_d2u", res.p2}};
    }
  } catch (const std::exception& err) {
    report["errors"].push_back(err.what());
    json timings;
    for (const auto& [k, v] : manifest.timings_sec) timings[k] = v;
    report["timings"] = timings;
    write_file(dir / "report.json", report.dump(2) + "\n");
    throw;
  }

  json timings;
  for (const auto& [k, v] : manifest.timings_sec) timings[k] = v;
  report["timings"] = timings;
  {
    json probe = report;
    probe.erase("timings");
    check_finite(probe, "report");
  }
  write_file(dir / "report.json", report.dump(2) + "\n");
  return manifest;
}

RunManifest run_convergence(const ScenarioConfig& cfg, const std::string& out_dir, int refine,
                            bool force, bool quiet) {
  if (refine < 2) throw ValidationError("convergence: refine must be >= 2");
  prepare_out_dir(out_dir, force);
  fs::path dir(out_dir);
  write_file(dir / "scenario.toml", cfg.raw_text);

  RunManifest manifest;
  manifest.scenario_hash = cfg.hash_hex;
  manifest.seed = cfg.seed;
  manifest.out_dir = out_dir;

  json report;
  report["version"] = kToolVersion;
  report["provenance"] = {{"scenario_hash", cfg.hash_hex},
                          {"seed", cfg.seed},
                          {"mode", cfg.parabolic() ? "parabolic" : "elliptic"},
                          {"tool_version", kToolVersion}};
  report["errors"] = json::array();

  const geom::InterfaceStack stack = cfg.make_stack();
  const bool exact = cfg.forcing.is_manufactured();

  try {
    PhaseTimer timer(manifest.timings_sec, "convergence");
    std::vector<solver::FieldSolution> sols;
    std::vector<double> hs;
    for (int k = 0; k < refine; ++k) {
      mesh::MeshParams params = cfg.mesh;
      params.nx = cfg.mesh.nx << k;
      params.ny = cfg.mesh.ny << k;
      if (!quiet) std::fprintf(stderr, "[lamlab] convergence level nx=%d\n", params.nx);
      if (cfg.parabolic())
        sols.push_back(solver::solve_parabolic(stack, cfg.coeff, cfg.forcing, cfg.time, params,
                                               cfg.boundary, cfg.cg_tol));
      else
        sols.push_back(solver::solve_elliptic(stack, cfg.coeff, cfg.forcing, params,
                                              cfg.boundary, cfg.cg_tol));
      hs.push_back(2.0 / params.nx);
    }

    std::string csv = "nx,h,l2_error,energy_error,flux_sup\n";
    std::vector<double> l2s, ens, fluxes, fit_hs;
    for (int k = 0; k < refine; ++k) {
      const int slab = sols[static_cast<std::size_t>(k)].slabs() - 1;
      const double t = sols[static_cast<std::size_t>(k)].times.back();
      ErrorMetrics err;
      bool have_err = true;
      if (exact)
        err = errors_vs_exact(sols[static_cast<std::size_t>(k)], cfg.forcing, t, slab);
      else if (k + 1 < refine)
        err = errors_vs_reference(sols[static_cast<std::size_t>(k)], sols.back(), slab);
      else
        have_err = false;
      const auto flux = solver::interface_flux_jump(sols[static_cast<std::size_t>(k)], cfg.coeff,
                                                    cfg.forcing, t, slab);
      csv += std::to_string(cfg.mesh.nx << k) + "," + fmt17(hs[static_cast<std::size_t>(k)]) +
             "," + fmt17(have_err ? err.l2 : 0.0) + "," + fmt17(have_err ? err.energy : 0.0) +
             "," + fmt17(flux.sup_abs_jump) + "\n";
      if (have_err) {
        l2s.push_back(err.l2);
        ens.push_back(err.energy);
        fit_hs.push_back(hs[static_cast<std::size_t>(k)]);
      }
      fluxes.push_back(flux.sup_abs_jump);
    }
    write_file(dir / "convergence.csv", csv);
    report["convergence"] = {{"levels", refine},
                             {"l2_rate", fitted_rate(fit_hs, l2s)},
                             {"energy_rate", fitted_rate(fit_hs, ens)},
                             {"flux_rate", fitted_rate(hs, fluxes)},
                             {"exact_reference", exact}};
  } catch (const std::exception& err) {
    report["errors"].push_back(err.what());
    write_file(dir / "report.json", report.dump(2) + "\n");
    throw;
  }

  json timings;
  for (const auto& [k, v] : manifest.timings_sec) timings[k] = v;
  report["timings"] = timings;
  {
    json probe = report;
    probe.erase("timings");
    check_finite(probe, "report");
  }
  write_file(dir / "report.json", report.dump(2) + "\n");
  return manifest;
}

}  // namespace lamlab::lab
