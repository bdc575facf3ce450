#include "geometry/interface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lamlab::geom {

namespace {

class Poly1 final : public InterfaceFn {
 public:
  explicit Poly1(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.push_back(0.0);
  }

  int xdim() const override { return 1; }

  InterfaceJet jet(const double* xp, int order) const override {
    const double x = xp[0];
    InterfaceJet out;
    out.order = order;
    // Horner evaluation of p, p', p'', p''' in one sweep.
    double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) {
      p3 = p3 * x + 3.0 * p2;
      p2 = p2 * x + 2.0 * p1;
      p1 = p1 * x + p0;
      p0 = p0 * x + c_[k];
    }
    out.value = p0;
    if (order >= 1) out.grad[0] = p1;
    if (order >= 2) out.hess[0][0] = p2;
    if (order >= 3) out.third[0][0][0] = p3;
    return out;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "poly1[";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << "]";
    return os.str();
  }

 private:
  std::vector<double> c_;
};

class Cosine1 final : public InterfaceFn {
 public:
  Cosine1(double a, double w, double phi, double c) : a_(a), w_(w), phi_(phi), c_(c) {}

  int xdim() const override { return 1; }

  InterfaceJet jet(const double* xp, int order) const override {
    const double u = w_ * xp[0] + phi_;
    InterfaceJet out;
    out.order = order;
    out.value = a_ * std::cos(u) + c_;
    if (order >= 1) out.grad[0] = -a_ * w_ * std::sin(u);
    if (order >= 2) out.hess[0][0] = -a_ * w_ * w_ * std::cos(u);
    if (order >= 3) out.third[0][0][0] = a_ * w_ * w_ * w_ * std::sin(u);
    return out;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "cos[" << a_ << "," << w_ << "," << phi_ << "," << c_ << "]";
    return os.str();
  }

 private:
  double a_, w_, phi_, c_;
};

class Flat final : public InterfaceFn {
 public:
  Flat(double c, int xdim) : c_(c), xdim_(xdim) {}
  int xdim() const override { return xdim_; }
  InterfaceJet jet(const double*, int order) const override {
    InterfaceJet out;
    out.order = order;
    out.value = c_;
    return out;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "flat[" << c_ << ",d" << xdim_ + 1 << "]";
    return os.str();
  }

 private:
  double c_;
  int xdim_;
};

class Poly2 final : public InterfaceFn {
 public:
  explicit Poly2(std::vector<Monomial2> ms) : ms_(std::move(ms)) {}

  int xdim() const override { return 2; }

  InterfaceJet jet(const double* xp, int order) const override {
    InterfaceJet out;
    out.order = order;
    for (const auto& m : ms_) {
      // derivative of x1^i x2^j w.r.t. multi-index (a,b)
      auto dpow = [](double x, int p, int n) {
        // d^n/dx^n x^p
        if (n > p) return 0.0;
        double f = 1.0;
        for (int k = 0; k < n; ++k) f *= static_cast<double>(p - k);
        return f * std::pow(x, p - n);
      };
      const double x1 = xp[0], x2 = xp[1];
      out.value += m.c * dpow(x1, m.i, 0) * dpow(x2, m.j, 0);
      if (order >= 1)
        for (int a = 0; a < 2; ++a)
          out.grad[a] += m.c * dpow(x1, m.i, a == 0) * dpow(x2, m.j, a == 1);
      if (order >= 2)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            out.hess[a][b] += m.c * dpow(x1, m.i, (a == 0) + (b == 0)) *
                              dpow(x2, m.j, (a == 1) + (b == 1));
      if (order >= 3)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int g = 0; g < 2; ++g)
              out.third[a][b][g] += m.c *
                                    dpow(x1, m.i, (a == 0) + (b == 0) + (g == 0)) *
                                    dpow(x2, m.j, (a == 1) + (b == 1) + (g == 1));
    }
    return out;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "poly2[";
    for (std::size_t k = 0; k < ms_.size(); ++k)
      os << (k ? ";" : "") << ms_[k].i << "," << ms_[k].j << "," << ms_[k].c;
    os << "]";
    return os.str();
  }

 private:
  std::vector<Monomial2> ms_;
};

}  // namespace

InterfacePtr make_poly1(std::vector<double> coeffs) {
  return std::make_shared<Poly1>(std::move(coeffs));
}

InterfacePtr make_cosine1(double amplitude, double omega, double phase, double offset) {
  return std::make_shared<Cosine1>(amplitude, omega, phase, offset);
}

InterfacePtr make_flat(double c, int xdim) { return std::make_shared<Flat>(c, xdim); }

InterfacePtr make_poly2(std::vector<Monomial2> monomials) {
  return std::make_shared<Poly2>(std::move(monomials));
}

InterfaceStack::InterfaceStack(int dimension, std::vector<InterfacePtr> interfaces)
    : d_(dimension), m_(static_cast<int>(interfaces.size())), interfaces_(std::move(interfaces)) {
  if (d_ != 2 && d_ != 3)
    throw ValidationError("InterfaceStack: dimension must be 2 or 3, got " + std::to_string(d_));
  for (const auto& f : interfaces_) {
    if (!f) throw ValidationError("InterfaceStack: null interface");
    if (f->xdim() != d_ - 1)
      throw ValidationError("InterfaceStack: interface dimension mismatch");
  }
}

InterfaceJet InterfaceStack::jet(int j, const double* xp, int order) const {
  if (j < 0 || j > m_ + 1)
    throw ValidationError("InterfaceStack: index " + std::to_string(j) + " out of [0," +
                          std::to_string(m_ + 1) + "]");
  InterfaceJet out;
  out.order = order;
  if (j == 0) {
    out.value = -1.0;
    return out;
  }
  if (j == m_ + 1) {
    out.value = 1.0;
    return out;
  }
  return interfaces_[static_cast<std::size_t>(j - 1)]->jet(xp, order);
}

InterfaceJet InterfaceStack::eval_interface(int j, const double* xp, int order) const {
  if (j < 1 || j > m_)
    throw ValidationError("eval_interface: index " + std::to_string(j) + " out of [1," +
                          std::to_string(m_) + "]");
  double r2 = xp[0] * xp[0];
  if (d_ == 3) r2 += xp[1] * xp[1];
  if (r2 >= 1.0) throw ValidationError("eval_interface: |x'| >= 1");
  if (order < 0 || order > 3) throw ValidationError("eval_interface: order must be 0..3");
  return jet(j, xp, order);
}

void InterfaceStack::validate(int samples_per_axis) const {
  if (m_ == 0) return;
  const int n1 = samples_per_axis;
  const int n2 = (d_ == 3) ? 64 : 1;
  // A column where adjacent interfaces coincide is allowed only if its grid
  // neighbours have a strictly positive gap (isolated touching).
  std::vector<char> touched(static_cast<std::size_t>(n1 + 1), 0);
  for (int j = 1; j <= m_ + 1; ++j) {
    std::fill(touched.begin(), touched.end(), 0);
    for (int i2 = 0; i2 < n2; ++i2) {
      for (int i1 = 0; i1 <= n1; ++i1) {
        double xp[2] = {-1.0 + 2.0 * i1 / n1, 0.0};
        if (d_ == 3) {
          xp[0] *= 0.999;
          xp[1] = (-1.0 + 2.0 * i2 / (n2 - 1)) * 0.999;
          if (xp[0] * xp[0] + xp[1] * xp[1] >= 1.0) continue;
        } else {
          xp[0] *= 0.999999;
        }
        const double lo = height(j - 1, xp);
        const double hi = height(j, xp);
        if (hi < lo - 1e-12)
          throw ValidationError("InterfaceStack: ordering violation h_" + std::to_string(j) +
                                " < h_" + std::to_string(j - 1) + " at x'=" +
                                std::to_string(xp[0]));
        if (j >= 1 && j <= m_) {
          if (hi <= -1.0 + 1e-12 || hi >= 1.0 - 1e-12)
            throw ValidationError("InterfaceStack: h_" + std::to_string(j) +
                                  " leaves (-1,1) at x'=" + std::to_string(xp[0]));
        }
        if (hi - lo <= 1e-12) {
          if (i1 > 0 && touched[static_cast<std::size_t>(i1 - 1)])
            throw ValidationError("InterfaceStack: interfaces " + std::to_string(j - 1) + "," +
                                  std::to_string(j) + " coincide on a non-isolated set");
          touched[static_cast<std::size_t>(i1)] = 1;
        }
      }
    }
  }
}

std::string InterfaceStack::describe() const {
  std::ostringstream os;
  os << "stack{d=" << d_ << ";m=" << m_;
  for (const auto& f : interfaces_) os << ";" << f->describe();
  os << "}";
  return os.str();
}

RegionIncidence classify_point(const InterfaceStack& stack, const VecD& x, double tol_iface) {
  const int d = stack.dimension();
  const double* xp = x.v.data();
  double r2 = xp[0] * xp[0];
  if (d == 3) r2 += xp[1] * xp[1];
  const double xd = x[d - 1];
  if (r2 >= 1.0 || std::abs(xd) > 1.0 + tol_iface)
    throw ValidationError("classify_point: point outside domain");

  RegionIncidence out;
  out.iface_distance = 2.0;
  int best_iface = 0;
  for (int j = 1; j <= stack.count(); ++j) {
    const double dj = std::abs(xd - stack.height(j, xp));
    if (dj < out.iface_distance) {
      out.iface_distance = dj;
      best_iface = j;
    }
  }
  if (stack.count() > 0 && out.iface_distance <= tol_iface) {
    out.kind = IncidenceKind::OnInterface;
    out.region = best_iface;
    return out;
  }
  if (std::abs(std::abs(xd) - 1.0) <= tol_iface) {
    out.kind = IncidenceKind::OnOuterBoundary;
    out.region = (xd > 0.0) ? stack.count() + 1 : 1;
    return out;
  }
  out.kind = IncidenceKind::Interior;
  out.region = stack.count() + 1;
  for (int j = 1; j <= stack.count(); ++j) {
    if (xd < stack.height(j, xp)) {
      out.region = j;
      break;
    }
  }
  return out;
}

}  // namespace lamlab::geom
