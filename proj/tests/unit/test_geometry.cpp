#include <cmath>

#include "doctest.h"
#include "geometry/frame.hpp"
#include "geometry/interface.hpp"
#include "geometry/selftest.hpp"

using namespace lamlab;
using namespace lamlab::geom;

namespace {

InterfaceStack flat_stack(std::vector<double> heights, int d = 2) {
  std::vector<InterfacePtr> fs;
  for (double c : heights) fs.push_back(make_flat(c, d - 1));
  return InterfaceStack(d, std::move(fs));
}

VecD pt2(double x, double y) { return VecD{2, {x, y, 0.0}}; }

}  // namespace

TEST_CASE("interface jets differentiate presets exactly") {
  // parabola h(x') = x'^2
  auto stack = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  double xp = 0.5;
  auto jet = stack.eval_interface(1, &xp, 2);
  CHECK(jet.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(jet.grad[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(jet.hess[0][0] == doctest::Approx(2.0).epsilon(1e-15));

  auto flat = InterfaceStack(2, {make_flat(0.0, 1)});
  xp = 0.3;
  auto fj = flat.eval_interface(1, &xp, 1);
  CHECK(fj.value == 0.0);
  CHECK(fj.grad[0] == 0.0);

  auto cosine = InterfaceStack(2, {make_cosine1(0.1, 2.0, 0.0)});
  xp = 0.0;
  auto cj = cosine.eval_interface(1, &xp, 3);
  CHECK(cj.value == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(cj.grad[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cj.hess[0][0] == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(cj.third[0][0][0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("eval_interface rejects bad arguments") {
  auto stack = flat_stack({0.0});
  double xp = 0.5;
  CHECK_THROWS_AS(stack.eval_interface(0, &xp, 1), ValidationError);
  CHECK_THROWS_AS(stack.eval_interface(2, &xp, 1), ValidationError);
  double far = 1.0;
  CHECK_THROWS_AS(stack.eval_interface(1, &far, 1), ValidationError);
}

TEST_CASE("stack validation flags ordering violations") {
  CHECK_THROWS_AS(flat_stack({0.5, -0.5}).validate(), ValidationError);
  CHECK_NOTHROW(flat_stack({-0.5, 0.5}).validate());
  // isolated touching is tolerated
  auto touching = InterfaceStack(2, {make_poly1({0.0, 0.0, -0.5}), make_poly1({0.0, 0.0, 0.5})});
  CHECK_NOTHROW(touching.validate());
}

TEST_CASE("classify_point") {
  auto stack = flat_stack({0.0});
  CHECK(classify_point(stack, pt2(0.3, -0.5)).kind == IncidenceKind::Interior);
  CHECK(classify_point(stack, pt2(0.3, -0.5)).region == 1);
  CHECK(classify_point(stack, pt2(0.0, 0.2)).region == 2);
  auto on = classify_point(stack, pt2(0.1, 0.0));
  CHECK(on.kind == IncidenceKind::OnInterface);
  CHECK(on.region == 1);
  CHECK(classify_point(stack, pt2(0.1, 1.0)).kind == IncidenceKind::OnOuterBoundary);
  CHECK_THROWS_AS(classify_point(stack, VecD{2, {1.5, 0.0, 0.0}}), ValidationError);
}

TEST_CASE("interface_normal") {
  auto flat = flat_stack({0.2});
  double xp = 0.4;
  auto n = interface_normal(flat, 1, &xp);
  CHECK(n[0] == doctest::Approx(0.0));
  CHECK(n[1] == doctest::Approx(1.0));

  auto line = InterfaceStack(2, {make_poly1({0.0, 1.0})});  // h = x'
  xp = 0.0;
  n = interface_normal(line, 1, &xp);
  CHECK(n[0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(n[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

  auto parab = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  xp = 0.5;  // grad h = 1
  n = interface_normal(parab, 1, &xp);
  CHECK(n[0] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(n[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("raw_tangent case selection") {
  auto parab = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  // above the interface: constant slope of h_m
  auto top = raw_tangent(parab, 1, pt2(0.5, 0.5));
  CHECK(top[0] == 1.0);
  CHECK(top[1] == doctest::Approx(1.0).epsilon(1e-14));
  // below: affine interpolation down to the bottom sentinel
  auto mid = raw_tangent(parab, 1, pt2(0.5, 0.0));
  CHECK(mid[1] == doctest::Approx(0.8).epsilon(1e-14));
  // flat stacks carry e_k everywhere
  auto flat = flat_stack({-0.3, 0.4});
  for (double y : {-0.9, -0.3, 0.0, 0.4, 0.9}) {
    auto l = raw_tangent(flat, 1, pt2(0.2, y));
    CHECK(l[0] == 1.0);
    CHECK(l[1] == 0.0);
  }
}

TEST_CASE("raw tangent is tangential on every interface") {
  auto stack = InterfaceStack(
      2, {make_poly1({-0.4, 0.1, 0.3}), make_cosine1(0.05, 3.0, 0.4, 0.35)});
  for (int j = 1; j <= 2; ++j)
    for (double xp : {-0.7, -0.2, 0.0, 0.45, 0.8}) {
      VecD x = pt2(xp, stack.height(j, &xp));
      auto l = raw_tangent(stack, 1, x);
      auto n = interface_normal(stack, j, &xp);
      CHECK(std::abs(dot(l, n)) < 1e-13);
    }
}

TEST_CASE("orthonormal_frame d=2") {
  auto parab = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  VecD x = pt2(0.5, 0.5);
  auto f = orthonormal_frame(parab, x);
  const double s = std::sqrt(2.0);
  CHECK(f.tangents[0][0] == doctest::Approx(1.0 / s));
  CHECK(f.tangents[0][1] == doctest::Approx(1.0 / s));
  CHECK(f.normal[0] == doctest::Approx(-1.0 / s));
  CHECK(f.normal[1] == doctest::Approx(1.0 / s));
}

TEST_CASE("orthonormal_frame d=3 gram-schmidt") {
  // plane h = x1 + x2 gives raw tangents (1,0,1), (0,1,1) above it
  auto stack = InterfaceStack(3, {make_poly2({{1, 0, 1.0}, {0, 1, 1.0}})});
  VecD x{3, {0.05, -0.02, 0.9}};
  REQUIRE(x[2] > stack.height(1, x.v.data()));
  auto f = orthonormal_frame(stack, x);
  CHECK(f.tangents[0][0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(f.tangents[0][2] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(f.tangents[1][0] == doctest::Approx(-1.0 / std::sqrt(6.0)));
  CHECK(f.tangents[1][1] == doctest::Approx(2.0 / std::sqrt(6.0)));
  CHECK(f.tangents[1][2] == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(f.normal[0] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(f.normal[1] == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(f.normal[2] == doctest::Approx(1.0 / std::sqrt(3.0)));
  // orthonormality
  for (int i = 0; i < 2; ++i) {
    CHECK(dot(f.tangents[i], f.normal) == doctest::Approx(0.0).epsilon(1e-12));
    for (int j = 0; j < 2; ++j)
      CHECK(dot(f.tangents[i], f.tangents[j]) ==
            doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
  }

  auto flat3 = flat_stack({0.0}, 3);
  auto ff = orthonormal_frame(flat3, VecD{3, {0.1, 0.2, 0.5}});
  CHECK(ff.tangents[0][0] == doctest::Approx(1.0));
  CHECK(ff.tangents[1][1] == doctest::Approx(1.0));
  CHECK(ff.normal[2] == doctest::Approx(1.0));
}

TEST_CASE("frame jacobian matches finite differences") {
  auto stack = InterfaceStack(
      2, {make_poly1({-0.4, 0.1, 0.3}), make_cosine1(0.05, 3.0, 0.4, 0.35)});
  for (auto x : {pt2(0.2, -0.1), pt2(-0.5, 0.1), pt2(0.3, 0.6)}) {
    auto jac = tangent_jacobian(stack, 1, x);
    const double h = 1e-7;
    for (int a = 0; a < 2; ++a) {
      VecD xm = x, xq = x;
      xm[a] -= h;
      xq[a] += h;
      auto fm = orthonormal_frame(stack, xm);
      auto fq = orthonormal_frame(stack, xq);
      for (int i = 0; i < 2; ++i) {
        const double fd = (fq.tangents[0][i] - fm.tangents[0][i]) / (2.0 * h);
        CHECK(jac.m[i][a] == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("nearest_projection") {
  auto flat = flat_stack({0.0});
  auto p = nearest_projection(flat, 1, pt2(0.3, 0.4));
  CHECK(p.point[0] == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(p.point[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.distance == doctest::Approx(0.4).epsilon(1e-12));

  auto line = InterfaceStack(2, {make_poly1({0.0, 1.0})});
  p = nearest_projection(line, 1, pt2(0.0, 0.2));
  CHECK(p.point[0] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(p.point[1] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(p.distance == doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(1e-10));

  auto parab = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  p = nearest_projection(parab, 1, pt2(0.0, 0.0));
  CHECK(p.distance == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("nearest_projection in three dimensions") {
  // plane z = 0.3 x - 0.2 y: closed-form distance |z0 - 0.3 x0 + 0.2 y0| / sqrt(1.13)
  auto stack = InterfaceStack(3, {make_poly2({{1, 0, 0.3}, {0, 1, -0.2}})});
  const VecD x{3, {0.1, -0.05, 0.4}};
  auto p = nearest_projection(stack, 1, x);
  const double expect = std::abs(0.4 - 0.3 * 0.1 - 0.2 * 0.05) / std::sqrt(1.0 + 0.09 + 0.04);
  CHECK(p.distance == doctest::Approx(expect).epsilon(1e-10));
  // the foot lies on the graph
  CHECK(p.point[2] == doctest::Approx(0.3 * p.point[0] - 0.2 * p.point[1]).epsilon(1e-12));
}

TEST_CASE("frame_at_anchor") {
  auto flat = flat_stack({0.0});
  auto f = frame_at_anchor(flat, pt2(0.2, -0.5));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(f.lambda[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

  // anchor just below the line y = x: Lambda rotates the normal onto e_d
  auto line = InterfaceStack(2, {make_poly1({0.0, 1.0})});
  VecD x0 = pt2(0.0, -0.05);
  auto fa = frame_at_anchor(line, x0);
  CHECK(fa.region == 1);
  double rot[2] = {0.0, 0.0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) rot[i] += fa.lambda[i][j] * fa.normal[j];
  CHECK(rot[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rot[1] == doctest::Approx(1.0).epsilon(1e-12));
  // orthogonality of Lambda
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double acc = 0.0;
      for (int k = 0; k < 2; ++k) acc += fa.lambda[i][k] * fa.lambda[j][k];
      CHECK(acc == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("anchor_points") {
  auto m1 = flat_stack({0.0});
  auto pts = anchor_points(m1, pt2(0.0, -0.5), 1);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][1] == doctest::Approx(-0.5));
  CHECK(pts[1][1] == doctest::Approx(0.0));

  auto m2 = flat_stack({-0.2, 0.3});
  pts = anchor_points(m2, pt2(0.1, 0.0), 2);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0][1] == doctest::Approx(-0.2));
  CHECK(pts[1][1] == doctest::Approx(0.0));
  CHECK(pts[2][1] == doctest::Approx(0.3));

  auto parab = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  pts = anchor_points(parab, pt2(0.5, 0.5), 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][0] == doctest::Approx(0.5));
  CHECK(pts[0][1] == doctest::Approx(0.25));
  CHECK(pts[1][1] == doctest::Approx(0.5));
}

TEST_CASE("extended_tangent") {
  auto flat = flat_stack({-0.3, 0.4});
  for (int donor = 1; donor <= 3; ++donor) {
    auto l = extended_tangent(flat, donor, 1, pt2(0.2, 0.1));
    CHECK(l[0] == doctest::Approx(1.0));
    CHECK(l[1] == doctest::Approx(0.0));
  }

  // donor above the parabola evaluated far below it
  auto parab = InterfaceStack(2, {make_poly1({0.0, 0.0, 1.0})});
  auto raw = extended_raw_tangent(parab, 2, 1, pt2(0.5, -0.9));
  CHECK(raw[1] == doctest::Approx(1.0).epsilon(1e-14));
  auto l = extended_tangent(parab, 2, 1, pt2(0.5, -0.9));
  CHECK(l[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(l[1] == doctest::Approx(1.0 / std::sqrt(2.0)));

  // one-sided traces agree on the interface
  auto stack = InterfaceStack(2, {make_poly1({-0.3, 0.2, 0.1}), make_poly1({0.4, -0.1})});
  double xp = 0.25;
  VecD on = pt2(xp, stack.height(1, &xp));
  auto from_donor = extended_tangent(stack, 2, 1, on);
  auto native = orthonormal_frame(stack, on).tangents[0];
  CHECK(norm(sub(from_donor, native)) < 1e-12);

  // vanishing donor gap must refuse
  auto touching = InterfaceStack(2, {make_poly1({0.0, 0.0, -0.5}), make_poly1({0.0, 0.0, 0.5})});
  CHECK_THROWS_AS(extended_tangent(touching, 2, 1, pt2(0.0, 0.5)), NumericError);
}

TEST_CASE("selftest: flat stack is exactly rigid") {
  auto metrics = selftest_stack(flat_stack({-0.3, 0.0, 0.4}), 2000, 7);
  CHECK(metrics.holder_half == 0.0);
  CHECK(metrics.sup_dl == 0.0);
  CHECK(metrics.sup_dl_raw == 0.0);
  CHECK(metrics.dll_jump[0] == 0.0);
  CHECK(metrics.ortho_residual < 1e-14);
  CHECK(metrics.tangency_residual < 1e-14);
}

TEST_CASE("selftest: neck family derivative scaling") {
  // sup |D_d l_d^{1,0}| = 1/sqrt(eps) for the neck family
  const double eps = 0.01;
  auto stack = make_neck_stack(eps);
  auto metrics = selftest_stack(stack, 4000, 11);
  CHECK(metrics.sup_dl_raw == doctest::Approx(1.0 / std::sqrt(eps)).epsilon(0.02));
  // derivative * gap^{1/2} stays bounded
  CHECK(metrics.sup_dl_raw_sqrt_gap < 4.0);
  CHECK(metrics.sup_dl_sqrt_gap < 4.0);
  // |D_k h_2 - D_k h_1| <= 2 sqrt(gap)
  CHECK(metrics.slope_ratio < 2.0 + 1e-9);

  auto report = geometry_selftest([](double e) { return make_neck_stack(e); },
                                  {1e-1, 1e-2, 1e-3, 1e-4}, 2000, 3);
  REQUIRE(report.per_eps.size() == 4);
  double hmin = 1e300, hmax = 0.0;
  for (const auto& met : report.per_eps) {
    CHECK(met.sup_dl_sqrt_gap < 4.0);
    hmin = std::min(hmin, met.holder_half);
    hmax = std::max(hmax, met.holder_half);
    // jumps of D_l l^k shrink with the probing offset
    CHECK(met.dll_jump[2] <= met.dll_jump[0] + 1e-12);
    // |D_k h_2 - D_k h_1| <= 2 gap^{1/2} uniformly in eps
    CHECK(met.slope_ratio <= 2.0 + 1e-9);
  }
  CHECK(hmax / hmin < 3.0);
}

TEST_CASE("neck family: vertical derivative component is gap-uniform") {
  // |D_d l_d^{1,0}| gap^{1/2} = 2|x'| (eps + x'^2)^{-1/2}: bounded by 2
  // globally and by sqrt(2) on the neck window |x'| <= sqrt(eps), with the
  // window maximum attained at |x'| = sqrt(eps). Uniform in eps.
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto stack = make_neck_stack(eps);
    double worst_global = 0.0, worst_window = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double xp = -0.99 + 1.98 * i / 400;
      const double gap = eps + xp * xp;
      VecD x = pt2(xp, 0.0);  // inside the neck strip
      auto jac = raw_tangent_jacobian(stack, 1, x);
      const double prod = std::abs(jac.m[1][1]) * std::sqrt(gap);
      worst_global = std::max(worst_global, prod);
      if (std::abs(xp) <= std::sqrt(eps)) worst_window = std::max(worst_window, prod);
    }
    CHECK(worst_global <= 2.0 + 1e-12);
    CHECK(worst_window <= std::sqrt(2.0) + 1e-12);
    CHECK(worst_global > 1.5);  // the bound is active, not vacuous
  }
}
