#include "solver/models.hpp"

#include <cmath>
#include <sstream>

namespace lamlab::solver {

CoefficientModel::CoefficientModel(std::vector<RegionEntries> regions, double declared_nu)
    : regions_(std::move(regions)), nu_(declared_nu) {
  if (regions_.empty()) throw ValidationError("CoefficientModel: no regions");
  if (nu_ <= 0.0) throw ValidationError("CoefficientModel: nu must be positive");
}

CoefficientModel CoefficientModel::constants(const std::vector<double>& a) {
  std::vector<RegionEntries> regions;
  double amin = 1e300, amax = 0.0;
  for (double v : a) {
    if (v <= 0.0) throw ValidationError("CoefficientModel: nonpositive coefficient");
    RegionEntries r;
    r.a11 = Poly3::constant(v);
    r.a22 = Poly3::constant(v);
    regions.push_back(r);
    amin = std::min(amin, v);
    amax = std::max(amax, v);
  }
  return CoefficientModel(std::move(regions), std::min(amin, 1.0 / amax));
}

Sym2 CoefficientModel::eval(int region, double t, Point2 p) const {
  const auto& r = regions_.at(static_cast<std::size_t>(region - 1));
  return {r.a11.eval(t, p.x, p.y), r.a12.eval(t, p.x, p.y), r.a22.eval(t, p.x, p.y)};
}

Sym2 CoefficientModel::eval_dx(int region, double t, Point2 p) const {
  const auto& r = regions_.at(static_cast<std::size_t>(region - 1));
  return {r.a11.dx().eval(t, p.x, p.y), r.a12.dx().eval(t, p.x, p.y),
          r.a22.dx().eval(t, p.x, p.y)};
}

Sym2 CoefficientModel::eval_dy(int region, double t, Point2 p) const {
  const auto& r = regions_.at(static_cast<std::size_t>(region - 1));
  return {r.a11.dy().eval(t, p.x, p.y), r.a12.dy().eval(t, p.x, p.y),
          r.a22.dy().eval(t, p.x, p.y)};
}

Sym2 CoefficientModel::eval_dt(int region, double t, Point2 p) const {
  const auto& r = regions_.at(static_cast<std::size_t>(region - 1));
  return {r.a11.dt().eval(t, p.x, p.y), r.a12.dt().eval(t, p.x, p.y),
          r.a22.dt().eval(t, p.x, p.y)};
}

bool CoefficientModel::time_dependent() const {
  for (const auto& r : regions_)
    if (r.a11.depends_on_t() || r.a12.depends_on_t() || r.a22.depends_on_t()) return true;
  return false;
}

std::string CoefficientModel::describe() const {
  std::ostringstream os;
  os << "coeff{nu=" << nu_;
  for (const auto& r : regions_)
    os << ";" << r.a11.describe() << "|" << r.a12.describe() << "|" << r.a22.describe();
  os << "}";
  return os.str();
}

ForcingModel ForcingModel::zero() {
  ForcingModel f;
  f.region_f_.push_back({});
  return f;
}

ForcingModel ForcingModel::per_region(std::vector<RegionVec> f, Poly3 dirichlet,
                                      Poly3 initial) {
  ForcingModel out;
  out.region_f_ = std::move(f);
  out.dirichlet_ = std::move(dirichlet);
  out.initial_ = std::move(initial);
  return out;
}

ForcingModel ForcingModel::manufactured(const CoefficientModel& coeff,
                                        std::vector<Poly3> iface_polys, Poly3 base,
                                        std::vector<Poly3> slopes_t, bool parabolic) {
  const int m = static_cast<int>(iface_polys.size());
  if (static_cast<int>(slopes_t.size()) != m)
    throw ValidationError("manufactured: one ramp slope per interface required");
  if (coeff.region_count() != m + 1)
    throw ValidationError("manufactured: coefficient regions must match the stack");

  ForcingModel out;
  out.manufactured_ = true;
  out.parabolic_correction_ = parabolic;
  out.has_jacobian_ = !parabolic;
  out.iface_polys_ = iface_polys;
  out.dirichlet_from_exact_ = true;

  const Poly3 y = Poly3::var_y();
  std::vector<Poly3> fields;
  Poly3 acc = base;
  fields.push_back(acc);
  for (int j = 0; j < m; ++j) {
    acc = acc + slopes_t[static_cast<std::size_t>(j)] *
                    (y - iface_polys[static_cast<std::size_t>(j)]);
    fields.push_back(acc);
  }
  out.exact_ = std::move(fields);

  // f = A grad u* is evaluated pointwise from the exact fields (see
  // value()); the coefficient model is copied so the forcing stays
  // self-contained under value copies.
  out.coeff_ = std::make_shared<CoefficientModel>(coeff);
  return out;
}

std::array<double, 2> ForcingModel::value(int region, double t, Point2 p) const {
  if (manufactured_) {
    const auto grad = exact_gradient(region, t, p);
    auto f = apply_sym(coeff_->eval(region, t, p), grad);
    if (parabolic_correction_) f[1] -= time_correction(t, p);
    return f;
  }
  const auto& rv = region_f_.size() == 1 ? region_f_[0]
                                         : region_f_.at(static_cast<std::size_t>(region - 1));
  return {rv.fx.eval(t, p.x, p.y), rv.fy.eval(t, p.x, p.y)};
}

std::array<double, 4> ForcingModel::jacobian(int region, double t, Point2 p) const {
  if (!has_jacobian_) throw NumericError("ForcingModel: spatial derivatives unavailable");
  if (manufactured_) {
    const auto& u = exact_.at(static_cast<std::size_t>(region - 1));
    const double uxx = u.dx().dx().eval(t, p.x, p.y);
    const double uxy = u.dx().dy().eval(t, p.x, p.y);
    const double uyy = u.dy().dy().eval(t, p.x, p.y);
    const auto g = exact_gradient(region, t, p);
    const Sym2 a = coeff_->eval(region, t, p);
    const Sym2 ax = coeff_->eval_dx(region, t, p);
    const Sym2 ay = coeff_->eval_dy(region, t, p);
    // d/dx (A grad u) = A_x grad u + A grad u_x
    return {ax[0] * g[0] + ax[1] * g[1] + a[0] * uxx + a[1] * uxy,
            ay[0] * g[0] + ay[1] * g[1] + a[0] * uxy + a[1] * uyy,
            ax[1] * g[0] + ax[2] * g[1] + a[1] * uxx + a[2] * uxy,
            ay[1] * g[0] + ay[2] * g[1] + a[1] * uxy + a[2] * uyy};
  }
  const auto& rv = region_f_.size() == 1 ? region_f_[0]
                                         : region_f_.at(static_cast<std::size_t>(region - 1));
  return {rv.fx.dx().eval(t, p.x, p.y), rv.fx.dy().eval(t, p.x, p.y),
          rv.fy.dx().eval(t, p.x, p.y), rv.fy.dy().eval(t, p.x, p.y)};
}

std::array<double, 2> ForcingModel::dt(int region, double t, Point2 p) const {
  if (manufactured_) {
    if (parabolic_correction_)
      throw NumericError("ForcingModel: time derivative unavailable in parabolic mode");
    const auto& u = exact_.at(static_cast<std::size_t>(region - 1));
    const auto gt =
        std::array<double, 2>{u.dx().dt().eval(t, p.x, p.y), u.dy().dt().eval(t, p.x, p.y)};
    const auto g = exact_gradient(region, t, p);
    const Sym2 at = coeff_->eval_dt(region, t, p);
    auto f = apply_sym(coeff_->eval(region, t, p), gt);
    f[0] += at[0] * g[0] + at[1] * g[1];
    f[1] += at[1] * g[0] + at[2] * g[1];
    return f;
  }
  const auto& rv = region_f_.size() == 1 ? region_f_[0]
                                         : region_f_.at(static_cast<std::size_t>(region - 1));
  return {rv.fx.dt().eval(t, p.x, p.y), rv.fy.dt().eval(t, p.x, p.y)};
}

double ForcingModel::dirichlet(double t, Point2 p, int region) const {
  if (dirichlet_from_exact_) return exact(region, t, p);
  return dirichlet_.eval(t, p.x, p.y);
}

double ForcingModel::initial(Point2 p, int region, double t_begin) const {
  if (dirichlet_from_exact_ && initial_.is_zero()) return exact(region, t_begin, p);
  return initial_.eval(t_begin, p.x, p.y);
}

double ForcingModel::exact(int region, double t, Point2 p) const {
  if (!manufactured_) throw NumericError("ForcingModel: no exact solution");
  return exact_.at(static_cast<std::size_t>(region - 1)).eval(t, p.x, p.y);
}

std::array<double, 2> ForcingModel::exact_gradient(int region, double t, Point2 p) const {
  if (!manufactured_) throw NumericError("ForcingModel: no exact solution");
  const auto& u = exact_.at(static_cast<std::size_t>(region - 1));
  return {u.dx().eval(t, p.x, p.y), u.dy().eval(t, p.x, p.y)};
}

double ForcingModel::time_correction(double t, Point2 p) const {
  // int_{-1}^{y} u*_t(t, x, s) ds across the strips below (region-wise
  // polynomial integrand; exact antiderivative per strip).
  double acc = 0.0;
  double lower = -1.0;
  const int m = static_cast<int>(iface_polys_.size());
  for (int j = 0; j <= m; ++j) {
    const double upper =
        (j < m) ? iface_polys_[static_cast<std::size_t>(j)].eval(t, p.x, 0.0) : 1.0;
    const double hi = std::min(p.y, upper);
    if (hi > lower) {
      const Poly3 anti = exact_[static_cast<std::size_t>(j)].dt().integral_y();
      acc += anti.eval(t, p.x, hi) - anti.eval(t, p.x, lower);
    }
    if (p.y <= upper) break;
    lower = upper;
  }
  return acc;
}

std::string ForcingModel::describe() const {
  std::ostringstream os;
  os << "forcing{man=" << manufactured_ << ";par=" << parabolic_correction_;
  for (const auto& rv : region_f_) os << ";" << rv.fx.describe() << "|" << rv.fy.describe();
  if (manufactured_)
    for (const auto& u : exact_) os << ";u*=" << u.describe();
  os << ";gD=" << dirichlet_.describe() << ";u0=" << initial_.describe() << "}";
  return os.str();
}

}  // namespace lamlab::solver
