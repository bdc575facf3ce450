#include "lab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "geometry/selftest.hpp"

namespace lamlab::lab {

using solver::Poly3;

namespace {

Poly3 poly_from_terms(const TomlValue& arr, const char* what) {
  if (arr.kind != TomlValue::Kind::Array)
    throw ValidationError(std::string(what) + ": expected an array of [c, it, ix, iy] terms");
  std::vector<Poly3::Term> terms;
  for (const auto& t : arr.array) {
    const auto nums = t.as_number_array();
    if (nums.empty() || nums.size() > 4)
      throw ValidationError(std::string(what) + ": term must be [c], [c,it], [c,it,ix] or [c,it,ix,iy]");
    Poly3::Term term;
    term.c = nums[0];
    if (nums.size() > 1) term.it = static_cast<int>(nums[1]);
    if (nums.size() > 2) term.ix = static_cast<int>(nums[2]);
    if (nums.size() > 3) term.iy = static_cast<int>(nums[3]);
    if (term.it < 0 || term.ix < 0 || term.iy < 0)
      throw ValidationError(std::string(what) + ": negative exponent");
    terms.push_back(term);
  }
  return Poly3(std::move(terms));
}

// interface preset -> function object plus (when polynomial) its Poly3 in x
struct CompiledInterface {
  geom::InterfacePtr fn;
  Poly3 poly;  // valid iff is_poly
  bool is_poly = false;
};

CompiledInterface compile_interface(const TomlValue& spec, int dimension) {
  const std::string preset = spec.string_or("preset", "");
  if (preset.empty()) throw ValidationError("interfaces: every entry needs a preset");
  CompiledInterface out;
  const Poly3 x = Poly3::var_x();
  if (preset == "flat") {
    const double c = spec.number_or("c", 0.0);
    out.fn = geom::make_flat(c, dimension - 1);
    out.poly = Poly3::constant(c);
    out.is_poly = true;
  } else if (preset == "parabola") {
    if (dimension != 2) throw ValidationError("interfaces: parabola preset is 2-D");
    const double a = spec.number_or("a", 1.0);
    const double b = spec.number_or("b", 0.0);
    const double c = spec.number_or("c", 0.0);
    out.fn = geom::make_poly1({c, b, a});
    out.poly = x * x.scaled(a) + x.scaled(b) + Poly3::constant(c);
    out.is_poly = true;
  } else if (preset == "cosine") {
    if (dimension != 2) throw ValidationError("interfaces: cosine preset is 2-D");
    out.fn = geom::make_cosine1(spec.number_or("amplitude", 0.1), spec.number_or("omega", 1.0),
                                spec.number_or("phase", 0.0), spec.number_or("offset", 0.0));
  } else if (preset == "poly") {
    if (dimension != 2) throw ValidationError("interfaces: poly preset is 2-D");
    const TomlValue* coeffs = spec.find("coeffs");
    if (!coeffs) throw ValidationError("interfaces: poly preset needs coeffs");
    const auto c = coeffs->as_number_array();
    out.fn = geom::make_poly1(c);
    Poly3 acc;
    Poly3 xk = Poly3::constant(1.0);
    for (double ck : c) {
      acc = acc + xk.scaled(ck);
      xk = xk * x;
    }
    out.poly = acc;
    out.is_poly = true;
  } else if (preset == "plane") {
    if (dimension != 3) throw ValidationError("interfaces: plane preset is 3-D");
    const double a = spec.number_or("a", 0.0);
    const double b = spec.number_or("b", 0.0);
    const double c = spec.number_or("c", 0.0);
    out.fn = geom::make_poly2({{1, 0, a}, {0, 1, b}, {0, 0, c}});
  } else {
    throw ValidationError("interfaces: unknown preset '" + preset + "'");
  }
  return out;
}

solver::CoefficientModel compile_coefficients(const TomlValue* spec, int region_count) {
  if (!spec) {
    return solver::CoefficientModel::constants(std::vector<double>(
        static_cast<std::size_t>(region_count), 1.0));
  }
  if (const TomlValue* values = spec->find("values")) {
    auto v = values->as_number_array();
    if (static_cast<int>(v.size()) != region_count)
      throw ValidationError("coefficients.values: expected one entry per region (" +
                            std::to_string(region_count) + ")");
    return solver::CoefficientModel::constants(v);
  }
  if (const TomlValue* regions = spec->find("regions")) {
    if (regions->kind != TomlValue::Kind::Array ||
        static_cast<int>(regions->array.size()) != region_count)
      throw ValidationError("coefficients.regions: expected one table per region");
    std::vector<solver::CoefficientModel::RegionEntries> entries;
    for (const auto& r : regions->array) {
      solver::CoefficientModel::RegionEntries e;
      if (const TomlValue* a11 = r.find("a11")) e.a11 = poly_from_terms(*a11, "a11");
      if (const TomlValue* a12 = r.find("a12")) e.a12 = poly_from_terms(*a12, "a12");
      if (const TomlValue* a22 = r.find("a22")) e.a22 = poly_from_terms(*a22, "a22");
      entries.push_back(e);
    }
    double nu = spec->number_or("nu", 0.0);
    if (nu <= 0.0) {
      // derive a certified constant by dense sampling
      double lo = 1e300, hi = 0.0;
      solver::CoefficientModel probe(entries, 1.0);
      for (int it = 0; it <= 4; ++it)
        for (int i = 0; i <= 40; ++i)
          for (int j = 0; j <= 40; ++j) {
            const Point2 p{-1.0 + 2.0 * i / 40, -1.0 + 2.0 * j / 40};
            const double t = -1.0 + it * 0.25;
            for (int reg = 1; reg <= region_count; ++reg) {
              const auto a = probe.eval(reg, t, p);
              lo = std::min(lo, solver::eig_min(a));
              hi = std::max(hi, solver::eig_max(a));
            }
          }
      if (lo <= 0.0) throw ValidationError("coefficients: sampled ellipticity is nonpositive");
      nu = std::min(lo, 1.0 / hi) * (1.0 - 1e-9);
    }
    return solver::CoefficientModel(entries, nu);
  }
  const double a0 = spec->number_or("a0", 1.0);
  if (a0 <= 0.0) throw ValidationError("coefficients: a0 must be positive");
  std::vector<double> v;
  for (int j = 0; j < region_count; ++j) v.push_back(j % 2 == 0 ? 1.0 : a0);
  return solver::CoefficientModel::constants(v);
}

Poly3 boundary_poly(const TomlValue* spec) {
  if (!spec) return (Poly3::var_y() + Poly3::constant(1.0)).scaled(0.5);
  if (const TomlValue* g = spec->find("g")) return poly_from_terms(*g, "boundary.g");
  const std::string preset = spec->string_or("preset", "linear_y");
  if (preset == "linear_y") return (Poly3::var_y() + Poly3::constant(1.0)).scaled(0.5);
  if (preset == "linear_x") return Poly3::var_x();
  if (preset == "constant") return Poly3::constant(spec->number_or("value", 0.0));
  throw ValidationError("boundary: unknown preset '" + preset + "'");
}

}  // namespace

std::string ScenarioConfig::canonical() const {
  std::ostringstream os;
  os << "mode=" << (mode == Mode::Elliptic ? "elliptic" : "parabolic") << ";d=" << dimension
     << ";seed=" << seed << ";cg_tol=" << cg_tol << ";stack={";
  for (const auto& f : interfaces) os << f->describe() << ";";
  os << "};coeff=" << coeff.describe() << ";forcing=" << forcing.describe() << ";bnd="
     << (boundary == mesh::BoundaryKind::TopBottom ? "top_bottom" : "all") << ";mesh=" << mesh.nx
     << "," << mesh.ny << "," << mesh.eta_min;
  if (mode == Mode::Parabolic)
    os << ";time=" << time.t_begin << "," << time.t_end << "," << time.steps;
  os << ";diag={";
  for (const auto& p : diag.probes) os << p[0] << "," << p[1] << "," << p[2] << ";";
  os << "r=";
  for (double r : diag.r_list) os << r << ",";
  os << ";budget=" << diag.budget << ";delta=" << diag.delta << ";mu=" << diag.mu
     << ";margin=" << diag.margin << "}";
  if (sweep.enabled) {
    os << ";sweep={a0=" << sweep.a0 << ";wf=" << sweep.window_factor << ";eps=";
    for (double e : sweep.eps_list) os << e << ",";
    os << "}";
  }
  os << ";geom={budget=" << geometry.budget << ";eps=";
  for (double e : geometry.eps_list) os << e << ",";
  os << "}";
  return os.str();
}

ScenarioConfig load_scenario_text(const std::string& toml_text) {
  const TomlValue root = toml_parse(toml_text);
  ScenarioConfig cfg;
  cfg.raw_text = toml_text;

  const std::string mode = root.string_or("mode", "");
  if (mode == "elliptic")
    cfg.mode = ScenarioConfig::Mode::Elliptic;
  else if (mode == "parabolic")
    cfg.mode = ScenarioConfig::Mode::Parabolic;
  else
    throw ValidationError("scenario: mode must be \"elliptic\" or \"parabolic\"");

  cfg.dimension = static_cast<int>(root.number_or("dimension", 2));
  if (cfg.dimension != 2 && cfg.dimension != 3)
    throw ValidationError("scenario: dimension must be 2 or 3");
  cfg.seed = static_cast<std::uint64_t>(root.number_or("seed", static_cast<double>(kDefaultSeed)));
  cfg.cg_tol = root.number_or("cg_tol", 1e-12);
  if (cfg.cg_tol <= 0.0 || cfg.cg_tol > 1e-2)
    throw ValidationError("scenario: cg_tol out of range");

  // ---- stack
  const TomlValue* stack_tbl = root.find("stack");
  const TomlValue* ifaces = root.find("interfaces");
  if (stack_tbl && stack_tbl->find("template") && ifaces)
    throw ValidationError("scenario: give either [stack] template or [[interfaces]], not both");
  if (stack_tbl && stack_tbl->find("template")) {
    const std::string tmpl = stack_tbl->string_or("template", "");
    if (tmpl != "parabola_neck")
      throw ValidationError("stack: unknown template '" + tmpl + "'");
    cfg.stack_is_neck = true;
    cfg.neck_eps = stack_tbl->number_or("eps", 0.05);
    if (cfg.neck_eps <= 0.0 || cfg.neck_eps >= 0.9)
      throw ValidationError("stack: eps out of range (0, 0.9)");
    const double e = cfg.neck_eps;
    cfg.interfaces.push_back(geom::make_poly1({-e / 2.0, 0.0, -0.5}));
    cfg.interfaces.push_back(geom::make_poly1({e / 2.0, 0.0, 0.5}));
    const Poly3 x2 = Poly3::var_x() * Poly3::var_x();
    cfg.iface_polys.push_back(x2.scaled(-0.5) + Poly3::constant(-e / 2.0));
    cfg.iface_polys.push_back(x2.scaled(0.5) + Poly3::constant(e / 2.0));
    cfg.iface_polys_ok = true;
  } else if (ifaces) {
    if (ifaces->kind != TomlValue::Kind::Array)
      throw ValidationError("interfaces: expected [[interfaces]] entries");
    bool all_poly = true;
    for (const auto& spec : ifaces->array) {
      CompiledInterface ci = compile_interface(spec, cfg.dimension);
      cfg.interfaces.push_back(ci.fn);
      cfg.iface_polys.push_back(ci.poly);
      all_poly = all_poly && ci.is_poly;
    }
    cfg.iface_polys_ok = all_poly;
  } else {
    throw ValidationError("scenario: missing [stack] or [[interfaces]]");
  }
  const geom::InterfaceStack stack = cfg.make_stack();
  stack.validate();  // ordering violation -> error

  const int regions = stack.count() + 1;

  // ---- coefficients
  cfg.coeff = compile_coefficients(root.find("coefficients"), regions);

  // ---- boundary / forcing
  const TomlValue* bnd = root.find("boundary");
  const std::string bkind = bnd ? bnd->string_or("kind", "top_bottom") : "top_bottom";
  if (bkind == "top_bottom")
    cfg.boundary = mesh::BoundaryKind::TopBottom;
  else if (bkind == "all")
    cfg.boundary = mesh::BoundaryKind::All;
  else
    throw ValidationError("boundary: kind must be \"top_bottom\" or \"all\"");
  const Poly3 gd = boundary_poly(bnd);
  Poly3 u0 = gd;
  if (bnd && bnd->find("u0")) u0 = poly_from_terms(bnd->at("u0"), "boundary.u0");

  const TomlValue* forcing_tbl = root.find("forcing");
  const std::string fpreset = forcing_tbl ? forcing_tbl->string_or("preset", "zero") : "zero";
  if (fpreset == "zero") {
    std::vector<solver::ForcingModel::RegionVec> fr(static_cast<std::size_t>(regions));
    cfg.forcing = solver::ForcingModel::per_region(std::move(fr), gd, u0);
  } else if (fpreset == "poly") {
    solver::ForcingModel::RegionVec rv;
    if (forcing_tbl->find("fx")) rv.fx = poly_from_terms(forcing_tbl->at("fx"), "forcing.fx");
    if (forcing_tbl->find("fy")) rv.fy = poly_from_terms(forcing_tbl->at("fy"), "forcing.fy");
    std::vector<solver::ForcingModel::RegionVec> fr(static_cast<std::size_t>(regions), rv);
    cfg.forcing = solver::ForcingModel::per_region(std::move(fr), gd, u0);
  } else if (fpreset == "manufactured") {
    if (!cfg.iface_polys_ok)
      throw ValidationError("forcing: manufactured ramps need polynomial interfaces");
    Poly3 base = Poly3::var_x() * Poly3::var_x() * Poly3::var_y() +
                 Poly3::var_y() * Poly3::var_y().scaled(0.5);
    if (forcing_tbl->find("base")) base = poly_from_terms(forcing_tbl->at("base"), "forcing.base");
    std::vector<Poly3> slopes;
    if (const TomlValue* s = forcing_tbl->find("slopes")) {
      for (double v : s->as_number_array()) slopes.push_back(Poly3::constant(v));
    }
    if (const TomlValue* ts = forcing_tbl->find("time_slopes")) {
      if (ts->kind != TomlValue::Kind::Array)
        throw ValidationError("forcing.time_slopes: expected one polynomial per interface");
      slopes.clear();
      for (const auto& entry : ts->array) slopes.push_back(poly_from_terms(entry, "time_slopes"));
    }
    while (static_cast<int>(slopes.size()) < stack.count())
      slopes.push_back(Poly3::constant(1.0));
    if (static_cast<int>(slopes.size()) != stack.count())
      throw ValidationError("forcing: one ramp slope per interface");
    cfg.forcing = solver::ForcingModel::manufactured(cfg.coeff, cfg.iface_polys, base, slopes,
                                                     cfg.parabolic());
  } else {
    throw ValidationError("forcing: unknown preset '" + fpreset + "'");
  }

  // ---- mesh
  if (const TomlValue* mesh_tbl = root.find("mesh")) {
    cfg.mesh.nx = static_cast<int>(mesh_tbl->number_or("nx", 64));
    cfg.mesh.ny = static_cast<int>(mesh_tbl->number_or("ny", 8));
    cfg.mesh.eta_min = mesh_tbl->number_or("eta_min", 1e-12);
  }
  if (cfg.mesh.nx < 2 || cfg.mesh.ny < 1 || cfg.mesh.eta_min <= 0.0)
    throw ValidationError("mesh: need nx >= 2, ny >= 1, eta_min > 0");

  // ---- time grid
  if (cfg.parabolic()) {
    const TomlValue* time_tbl = root.find("time");
    if (!time_tbl) throw ValidationError("scenario: parabolic mode requires [time]");
    cfg.time.t_begin = time_tbl->number_or("t_begin", -1.0);
    cfg.time.t_end = time_tbl->number_or("t_end", 0.0);
    cfg.time.steps = static_cast<int>(time_tbl->number_or("steps", 32));
    if (cfg.time.steps < 1 || cfg.time.t_end <= cfg.time.t_begin)
      throw ValidationError("time: need steps >= 1 and t_end > t_begin");
  }

  // ---- diagnostics
  if (const TomlValue* d = root.find("diagnostics")) {
    if (const TomlValue* probes = d->find("probes")) {
      for (const auto& p : probes->array) {
        const auto nums = p.as_number_array();
        if (nums.size() == 2)
          cfg.diag.probes.push_back({0.0, nums[0], nums[1]});
        else if (nums.size() == 3)
          cfg.diag.probes.push_back({nums[0], nums[1], nums[2]});
        else
          throw ValidationError("diagnostics.probes: entries are [x,y] or [t,x,y]");
      }
    }
    if (const TomlValue* rl = d->find("r_list")) cfg.diag.r_list = rl->as_number_array();
    cfg.diag.budget = static_cast<int>(d->number_or("budget", 4000));
    cfg.diag.delta = d->number_or("delta", 0.75);
    cfg.diag.mu = d->number_or("mu", 1.0);
    cfg.diag.margin = d->number_or("margin", 0.02);
  }
  if (!(cfg.diag.delta > 0.5 && cfg.diag.delta < 1.0))
    throw ValidationError("diagnostics: delta must lie in (1/2, 1)");
  if (!(cfg.diag.mu > 0.0 && cfg.diag.mu <= 1.0))
    throw ValidationError("diagnostics: mu must lie in (0, 1]");
  if (cfg.diag.budget < 2) throw ValidationError("diagnostics: budget too small");

  // ---- sweep
  if (const TomlValue* s = root.find("sweep")) {
    cfg.sweep.enabled = true;
    if (const TomlValue* vals = s->find("values")) cfg.sweep.eps_list = vals->as_number_array();
    if (cfg.sweep.eps_list.empty())
      throw ValidationError("sweep: values must list at least one eps");
    cfg.sweep.a0 = s->number_or("a0", 2.0);
    cfg.sweep.window_factor = s->number_or("window_factor", 2.0);
    if (const TomlValue* pr = s->find("phi_radii")) cfg.sweep.phi_radii = pr->as_number_array();
  }

  // ---- geometry checks
  if (const TomlValue* g = root.find("geometry")) {
    cfg.geometry.budget = static_cast<int>(g->number_or("budget", 10000));
    if (const TomlValue* el = g->find("eps_list")) cfg.geometry.eps_list = el->as_number_array();
  }

  cfg.hash_hex = [&] {
    std::ostringstream os;
    os << std::hex << fnv1a64(cfg.canonical());
    return os.str();
  }();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scenario_text(ss.str());
}

}  // namespace lamlab::lab
