#include <cmath>

#include "doctest.h"
#include "diag/campanato.hpp"
#include "diag/fields.hpp"
#include "diag/seminorm.hpp"
#include "diag/sweep.hpp"
#include "geometry/selftest.hpp"
#include "solver/solve.hpp"

using namespace lamlab;
using namespace lamlab::diag;
using namespace lamlab::geom;
using namespace lamlab::solver;

TEST_CASE("parabolic distance") {
  CHECK(parabolic_distance({0.0, {0.0, 0.0}}, {0.0, {3.0, 4.0}}) == doctest::Approx(5.0));
  CHECK(parabolic_distance({-0.25, {0.0, 0.0}}, {0.0, {0.0, 0.0}}) == doctest::Approx(0.5));
  CHECK(parabolic_distance({-0.04, {0.3, 0.0}}, {0.0, {0.0, 0.0}}) == doctest::Approx(0.3));
}

TEST_CASE("holder seminorm on closed forms") {
  // constant field
  SeminormRequest req;
  req.field = {1, [](double, Point2) { return std::array<double, 3>{2.5, 0, 0}; }};
  req.gamma = 0.5;
  req.budget = 500;
  CHECK(holder_seminorm(req) == doctest::Approx(0.0));

  // f(x) = sqrt|x| with gamma = 1/2 has constant 1 (attained against 0)
  req.field = {1, [](double, Point2 p) {
                 return std::array<double, 3>{std::sqrt(std::abs(p.x)), 0, 0};
               }};
  req.lo = {-1.0, -0.01};
  req.hi = {1.0, 0.01};
  req.budget = 6000;
  const double c = holder_seminorm(req);
  CHECK(c <= 1.0 + 1e-9);
  CHECK(c  > 0.98);

  // linear field with gamma = 1 gives the Lipschitz slope exactly
  req.field = {1, [](double, Point2 p) { return std::array<double, 3>{p.x, 0, 0}; }};
  req.gamma = 1.0;
  req.lo = {-0.95, -0.95};
  req.hi = {0.95, 0.95};
  req.budget = 500;
  CHECK(holder_seminorm(req) == doctest::Approx(1.0).epsilon(1e-12));

  // monotonicity in the budget (a superset of pairs can only raise the sup)
  req.field = {1, [](double, Point2 p) {
                 return std::array<double, 3>{std::cos(3.0 * p.x) * p.y, 0, 0};
               }};
  req.gamma = 0.7;
  req.budget = 400;
  const double small = holder_seminorm(req);
  req.budget = 3000;
  const double large = holder_seminorm(req);
  CHECK(large >= small - 1e-12);
}

TEST_CASE("time quotient") {
  auto linear = [](double t, Point2) { return t; };
  CHECK(time_quotient(linear, 1.0, 0.25, 0.0, {0, 0}) == doctest::Approx(1.0));
  CHECK(time_quotient(linear, 1.0, 0.0625, -0.3, {0, 0}) == doctest::Approx(1.0));

  auto quad = [](double t, Point2) { return t * t; };
  const double t = 0.7, h = 0.2;
  CHECK(time_quotient(quad, 1.0, h, t, {0, 0}) == doctest::Approx(2.0 * t - h));

  auto pow34 = [](double t, Point2) { return std::pow(std::abs(t), 0.75); };
  for (double hh : {0.5, 0.25, 0.06}) {
    CHECK(time_quotient(pow34, 0.75, hh, 0.0, {0, 0}) == doctest::Approx(-1.0));
  }

  // linearity delta(a f + b g) = a delta f + b delta g
  auto f = [](double t, Point2 p) { return t * p.x + t * t; };
  auto g = [](double t, Point2 p) { return std::sin(t) + p.y; };
  auto combo = [&](double t, Point2 p) { return 2.0 * f(t, p) - 3.0 * g(t, p); };
  const Point2 p{0.4, -0.2};
  CHECK(time_quotient(combo, 0.6, 0.1, 0.0, p) ==
        doctest::Approx(2.0 * time_quotient(f, 0.6, 0.1, 0.0, p) -
                        3.0 * time_quotient(g, 0.6, 0.1, 0.0, p)));
}

TEST_CASE("campanato phi closed forms") {
  // constants minimize to zero
  std::vector<std::array<double, 2>> samples(100, {3.0, -1.0});
  CHECK(phi_from_samples(samples) == doctest::Approx(0.0));

  // g1(y) = y - z0 on [z0 - r, z0 + r]: phi = 4 r / 9
  for (double r : {0.5, 0.2, 0.05}) {
    samples.clear();
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      const double y = -r + 2.0 * r * (i + 0.5) / n;
      samples.push_back({y, 0.0});
    }
    CHECK(phi_from_samples(samples) == doctest::Approx(4.0 * r / 9.0).epsilon(0.02));
  }

  // translation invariance and degree-1 homogeneity
  samples.clear();
  Rng rng(17);
  for (int i = 0; i < 500; ++i)
    samples.push_back({rng.uniform(-1.0, 2.0), rng.uniform(0.0, 1.0)});
  const double base = phi_from_samples(samples);
  auto shifted = samples;
  for (auto& s : shifted) {
    s[0] += 11.0;
    s[1] -= 4.0;
  }
  CHECK(phi_from_samples(shifted) == doctest::Approx(base).epsilon(1e-6));
  auto scaled = samples;
  for (auto& s : scaled) {
    s[0] *= 5.0;
    s[1] *= 5.0;
  }
  CHECK(phi_from_samples(scaled) == doctest::Approx(5.0 * base).epsilon(1e-8));
}

TEST_CASE("decay fit") {
  CHECK(decay_fit({{0.2, 0.04}, {0.1, 0.02}, {0.05, 0.01}}).slope ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double c = 0.37;
  CHECK(decay_fit({{0.2, c * std::sqrt(0.2)}, {0.1, c * std::sqrt(0.1)},
                   {0.05, c * std::sqrt(0.05)}})
            .slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(decay_fit({{0.2, 0.1}, {0.1, 0.0}, {0.05, 0.0}}), ValidationError);
  auto fit = decay_fit({{0.2, 0.1}, {0.1, 0.05}, {0.05, 0.025}, {0.025, 0.0}});
  CHECK(fit.dropped_zero);
  CHECK(fit.used == 3);

  // phi of g1(y) = y over shrinking intervals has slope 1
  std::vector<PhiRecord> recs;
  for (double r : {0.2, 0.1, 0.05}) {
    std::vector<std::array<double, 2>> samples;
    for (int i = 0; i < 3000; ++i)
      samples.push_back({-r + 2.0 * r * (i + 0.5) / 3000, 0.0});
    recs.push_back({r, phi_from_samples(samples)});
  }
  CHECK(decay_fit(recs).slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("piecewise constant projection") {
  auto stack = InterfaceStack(2, {make_flat(0.0, 1)});
  // field constant per region: zero deviation
  auto piecewise = [](double, Point2 p) { return p.y > 0.0 ? 2.0 : -1.0; };
  auto proj = piecewise_const_project(piecewise, stack, 0.0, {0.0, 0.0}, 0.3, 4000, false, {});
  CHECK(proj.l1_deviation < 1e-12);
  CHECK(proj.strip_means[1] == doctest::Approx(-1.0));
  CHECK(proj.strip_means[2] == doctest::Approx(2.0));

  // global linear field in one strip: deviation = mean |y - ybar|, linear in r
  auto empty = InterfaceStack(2, {});
  auto linear = [](double, Point2 p) { return p.y; };
  std::vector<double> devs;
  for (double r : {0.2, 0.1}) {
    auto pr = piecewise_const_project(linear, empty, 0.0, {0.0, 0.0}, r, 20000, false, {});
    devs.push_back(pr.l1_deviation);
  }
  CHECK(devs[0] / devs[1] == doctest::Approx(2.0).epsilon(0.05));
  // exact value over a disc: mean |y| with mean 0 = 4r/(3 pi)
  CHECK(devs[0] == doctest::Approx(4.0 * 0.2 / (3.0 * M_PI)).epsilon(0.03));

  // piecewise C^{1/2} field across a parabola stack decays at >= 0.3
  auto parab = InterfaceStack(2, {make_poly1({0.1, 0.0, 0.5})});
  auto rough = [&parab](double, Point2 p) {
    double xq = std::clamp(p.x, -0.999, 0.999);
    const double h = parab.height(1, &xq);
    return p.y > h ? std::sqrt(p.y - h) : -0.5 * std::sqrt(h - p.y);
  };
  std::vector<double> rs{0.2, 0.1, 0.05};
  std::vector<PhiRecord> recs;
  for (double r : rs) {
    auto pr = piecewise_const_project(rough, parab, 0.0, {0.0, 0.1}, r, 20000, false, {});
    recs.push_back({r, pr.l1_deviation});
  }
  CHECK(decay_fit(recs).slope >= 0.3);
}

TEST_CASE("derived fields on the two-layer oracle") {
  auto stack = InterfaceStack(2, {make_flat(0.0, 1)});
  auto coeff = CoefficientModel::constants({1.0, 2.0});
  auto bc = (Poly3::var_y() + Poly3::constant(1.0)).scaled(0.5);
  auto forcing = ForcingModel::per_region({{}, {}}, bc, Poly3());
  auto sol = solve_elliptic(stack, coeff, forcing, {32, 8, 1e-12});
  DerivedFields fields(sol, stack, coeff, forcing);

  // flat stack: D_{l^1} u = du/dx = 0, U = (A grad u)_y = 2/3 on both sides
  for (Point2 p : {Point2{0.2, -0.3}, Point2{-0.4, 0.45}, Point2{0.0, -0.02},
                   Point2{0.1, 0.02}}) {
    CHECK(fields.dlu(1, 0.0, p) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(fields.conormal(0.0, p) == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  }
  // discrete pair jump across the interface is tiny
  const auto jump = fields.pair_jump(1, 0.0, 0.25, 0.01);
  CHECK(std::abs(jump[0]) < 1e-8);
  CHECK(std::abs(jump[1]) < 1e-8);
}

TEST_CASE("corrected flux data vanishes on flat constant scenarios") {
  auto stack = InterfaceStack(2, {make_flat(0.0, 1)});
  auto coeff = CoefficientModel::constants({1.0, 2.0});
  auto bc = (Poly3::var_y() + Poly3::constant(1.0)).scaled(0.5);
  auto forcing = ForcingModel::per_region({{}, {}}, bc, Poly3());
  auto sol = solve_elliptic(stack, coeff, forcing, {32, 8, 1e-12});
  DerivedFields fields(sol, stack, coeff, forcing);
  auto data = corrected_flux_data(fields, 0.0, {0.1, -0.4});

  // flat interfaces: D l = 0 and D_l n_j = 0, so f1 = htilde = f3 = 0
  for (Point2 p : {Point2{0.2, -0.5}, Point2{-0.3, 0.4}}) {
    const auto v1 = data.f1(0.0, p);
    CHECK(std::abs(v1[0]) < 1e-8);
    CHECK(std::abs(v1[1]) < 1e-8);
    const auto v3 = data.f3(0.0, p);
    CHECK(std::abs(v3[0]) < 1e-8);
    CHECK(std::abs(v3[1]) < 1e-8);
  }
  CHECK(std::abs(data.htilde(1, 0.0, 0.3)) < 1e-8);

  // flat stack with f = (0, y): D_l f = (l . grad) f has zero first
  // component and l = e_1, so f1 = 0 still
  auto forcing2 = ForcingModel::per_region({{Poly3(), Poly3::var_y()},
                                            {Poly3(), Poly3::var_y()}},
                                           bc, Poly3());
  auto sol2 = solve_elliptic(stack, coeff, forcing2, {32, 8, 1e-12});
  DerivedFields fields2(sol2, stack, coeff, forcing2);
  auto data2 = corrected_flux_data(fields2, 0.0, {0.1, -0.4});
  const auto v = data2.f1(0.0, {0.2, -0.5});
  CHECK(std::abs(v[0]) < 1e-8);
  CHECK(std::abs(v[1]) < 1e-8);
}

TEST_CASE("htilde matches a symbolic evaluation on the parabola stack") {
  // u piecewise linear across a parabola interface; A constant contrast.
  // htilde_j = [D_l n_j . (-A grad u + f)] has a closed form from the
  // analytic normal derivative along the interface.
  auto stack = InterfaceStack(2, {make_poly1({0.0, 0.0, 0.5})});  // h = x^2/2
  auto coeff = CoefficientModel::constants({1.0, 2.0});
  const Poly3 base = Poly3::var_y().scaled(0.5);
  const Poly3 h_poly = Poly3::var_x() * Poly3::var_x().scaled(0.5);
  auto forcing = ForcingModel::manufactured(coeff, {h_poly}, base,
                                            {Poly3::constant(0.4)}, false);
  auto sol = solve_elliptic(stack, coeff, forcing, {96, 24, 1e-12}, mesh::BoundaryKind::All);
  DerivedFields fields(sol, stack, coeff, forcing);
  auto data = corrected_flux_data(fields, 0.0, {0.2, -0.2});

  const double xp = 0.2;
  // symbolic: s = h'(xp) = xp, w3 = (1+s^2)^{-3/2}, dn/dx' = -h'' w3 (1, s),
  // l1 = 1/sqrt(1+s^2), D_l n = l1 dn/dx'
  const double s = xp, hpp = 1.0;
  const double w3 = std::pow(1.0 + s * s, -1.5);
  const double l1 = 1.0 / std::sqrt(1.0 + s * s);
  const double dln[2] = {-hpp * w3 * l1, -hpp * w3 * s * l1};
  // one-sided values of (-A grad u + f): manufactured f = A grad u*, and
  // grad u -> grad u* as the mesh refines, so the bracket tends to
  // [D_l n . (A grad u* - A grad u*)] = 0... the jump instead comes from
  // the *discrete* gradient mismatch; with the exact fields the bracket is
  //   D_l n . (f+ - A+ grad u+) - D_l n . (f- - A- grad u-) = 0.
  // Use instead f = 0 and the same u: bracket = [D_l n . (-A grad u*)].
  auto forcing0 = ForcingModel::per_region({{}, {}}, Poly3(), Poly3());
  DerivedFields fields0(sol, stack, coeff, forcing0);
  auto data0 = corrected_flux_data(fields0, 0.0, {0.2, -0.2});
  // grad u* below = (0, 0.5); above = 0.5 e_y + 0.4 (-h', 1) = (-0.4 xp, 0.9)
  const double below[2] = {0.0, 0.5};
  const double above[2] = {-0.4 * xp, 0.9};
  const double expect = (dln[0] * (-2.0 * above[0]) + dln[1] * (-2.0 * above[1])) -
                        (dln[0] * (-1.0 * below[0]) + dln[1] * (-1.0 * below[1]));
  CHECK(data0.htilde(1, 0.0, xp) == doctest::Approx(expect).epsilon(5e-3));
  (void)data;
}

TEST_CASE("kinked field |y|: per-region norms vanish, conormal jump is 2") {
  auto stack = InterfaceStack(2, {make_flat(0.0, 1)});
  auto mesh = lamlab::mesh::build_strip_mesh(stack, {24, 12, 1e-12});
  FieldSolution sol;
  sol.mesh = mesh;
  sol.times = {0.0};
  std::vector<double> nodal(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
    nodal[v] = std::abs(mesh.vertices[v].y);
  sol.nodal.push_back(nodal);
  std::vector<std::array<double, 2>> grads(mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e)
    grads[e] = mesh.p1_gradient(static_cast<int>(e), nodal);
  sol.grads.push_back(grads);

  auto coeff = CoefficientModel::constants({1.0, 1.0});
  auto forcing = ForcingModel::zero();
  DerivedFields fields(sol, stack, coeff, forcing);
  NormTableOptions opt;
  opt.budget = 600;
  auto table = piecewise_norm_table(fields, opt);
  for (const auto& row : table) {
    CHECK(row.seminorm_du < 1e-8);  // piecewise affine
    CHECK(row.sup_d2u < 1e-7);
  }
  // the gradient jump shows up in the conormal pair component with size 2
  const auto jump = fields.pair_jump(1, 0.0, 0.2, 0.05);
  CHECK(std::abs(jump[0]) < 1e-8);                       // tangential part continuous
  CHECK(jump[1] == doctest::Approx(2.0).epsilon(1e-6));  // [n . grad u] = 2
}

TEST_CASE("constructed flux jump is detected at its magnitude") {
  // u = y below, u = 3y above: with A = I the conormal flux jumps by 2
  auto stack = InterfaceStack(2, {make_flat(0.0, 1)});
  auto mesh = lamlab::mesh::build_strip_mesh(stack, {16, 8, 1e-12});
  FieldSolution sol;
  sol.mesh = mesh;
  sol.times = {0.0};
  std::vector<double> nodal(mesh.vertices.size());
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const double y = mesh.vertices[v].y;
    nodal[v] = y <= 0.0 ? y : 3.0 * y;
  }
  sol.nodal.push_back(nodal);
  std::vector<std::array<double, 2>> grads(mesh.triangles.size());
  for (std::size_t e = 0; e < mesh.triangles.size(); ++e)
    grads[e] = mesh.p1_gradient(static_cast<int>(e), nodal);
  sol.grads.push_back(grads);

  auto coeff = CoefficientModel::constants({1.0, 1.0});
  auto forcing = ForcingModel::zero();
  auto flux = interface_flux_jump(sol, coeff, forcing, 0.0);
  for (const auto& rec : flux.edges) CHECK(rec.jump == doctest::Approx(2.0).epsilon(1e-10));
  DerivedFields fields(sol, stack, coeff, forcing);
  const auto jump = fields.pair_jump(1, 0.0, -0.3, 0.05);
  CHECK(jump[1] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("homogeneous medium sweep is eps-independent") {
  SweepOptions opt;
  opt.a0 = 1.0;
  opt.eps_list = {0.1, 0.05, 0.025};
  opt.mesh = {64, 4, 1e-12};
  opt.budget = 400;
  const auto res = gap_sweep(opt);
  double lo = 1e300, hi = 0.0;
  for (const auto& row : res.rows) {
    REQUIRE(row.error.empty());
    lo = std::min(lo, row.sup_du);
    hi = std::max(hi, row.sup_du);
    // u = x exactly: second derivatives and gradient seminorms are noise
    for (double d2 : row.sup_d2u_region) CHECK(d2 < 1e-7);
    for (double s : row.seminorm_du_region) CHECK(s < 1e-6);
  }
  CHECK(hi / lo < 1.05);
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("norm table on a piecewise-linear oracle") {
  auto stack = InterfaceStack(2, {make_flat(0.0, 1)});
  auto coeff = CoefficientModel::constants({1.0, 2.0});
  auto bc = (Poly3::var_y() + Poly3::constant(1.0)).scaled(0.5);
  auto forcing = ForcingModel::per_region({{}, {}}, bc, Poly3());
  auto sol = solve_elliptic(stack, coeff, forcing, {32, 8, 1e-12});
  DerivedFields fields(sol, stack, coeff, forcing);

  NormTableOptions opt;
  opt.budget = 800;
  auto table = piecewise_norm_table(fields, opt);
  REQUIRE(table.size() == 2);
  for (const auto& row : table) {
    CHECK(row.sup_u <= 1.0 + 1e-9);
    CHECK(row.seminorm_du < 1e-6);   // per-region gradient is constant
    CHECK(row.sup_d2u < 1e-5);
  }
  CHECK(table[0].sup_u == doctest::Approx(2.0 / 3.0).epsilon(1e-8));  // interface value
  CHECK(table[1].sup_u == doctest::Approx(1.0).epsilon(1e-9));        // top boundary value
}
