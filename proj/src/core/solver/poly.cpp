#include "solver/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lamlab::solver {

void Poly3::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    if (a.it != b.it) return a.it < b.it;
    if (a.ix != b.ix) return a.ix < b.ix;
    return a.iy < b.iy;
  });
  std::vector<Term> merged;
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().it == t.it && merged.back().ix == t.ix &&
        merged.back().iy == t.iy)
      merged.back().c += t.c;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.c == 0.0; }),
               merged.end());
  terms_ = std::move(merged);
}

Poly3 Poly3::constant(double c) {
  if (c == 0.0) return Poly3();
  return Poly3({{0, 0, 0, c}});
}
Poly3 Poly3::var_t() { return Poly3({{1, 0, 0, 1.0}}); }
Poly3 Poly3::var_x() { return Poly3({{0, 1, 0, 1.0}}); }
Poly3 Poly3::var_y() { return Poly3({{0, 0, 1, 1.0}}); }

double Poly3::eval(double t, double x, double y) const {
  double acc = 0.0;
  for (const Term& term : terms_) {
    double v = term.c;
    for (int i = 0; i < term.it; ++i) v *= t;
    for (int i = 0; i < term.ix; ++i) v *= x;
    for (int i = 0; i < term.iy; ++i) v *= y;
    acc += v;
  }
  return acc;
}

Poly3 Poly3::dt() const {
  std::vector<Term> out;
  for (const Term& t : terms_)
    if (t.it > 0) out.push_back({t.it - 1, t.ix, t.iy, t.c * t.it});
  return Poly3(std::move(out));
}

Poly3 Poly3::dx() const {
  std::vector<Term> out;
  for (const Term& t : terms_)
    if (t.ix > 0) out.push_back({t.it, t.ix - 1, t.iy, t.c * t.ix});
  return Poly3(std::move(out));
}

Poly3 Poly3::dy() const {
  std::vector<Term> out;
  for (const Term& t : terms_)
    if (t.iy > 0) out.push_back({t.it, t.ix, t.iy - 1, t.c * t.iy});
  return Poly3(std::move(out));
}

Poly3 Poly3::operator+(const Poly3& o) const {
  std::vector<Term> out = terms_;
  out.insert(out.end(), o.terms_.begin(), o.terms_.end());
  return Poly3(std::move(out));
}

Poly3 Poly3::operator-(const Poly3& o) const { return *this + o.scaled(-1.0); }

Poly3 Poly3::operator*(const Poly3& o) const {
  std::vector<Term> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const Term& a : terms_)
    for (const Term& b : o.terms_)
      out.push_back({a.it + b.it, a.ix + b.ix, a.iy + b.iy, a.c * b.c});
  return Poly3(std::move(out));
}

Poly3 Poly3::scaled(double s) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.c *= s;
  return Poly3(std::move(out));
}

Poly3 Poly3::integral_y() const {
  std::vector<Term> out = terms_;
  for (Term& t : out) {
    t.c /= (t.iy + 1);
    t.iy += 1;
  }
  return Poly3(std::move(out));
}

bool Poly3::depends_on_t() const {
  for (const Term& t : terms_)
    if (t.it > 0) return true;
  return false;
}

int Poly3::degree_y() const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.iy);
  return d;
}

std::string Poly3::describe() const {
  std::ostringstream os;
  os << "p3[";
  for (std::size_t i = 0; i < terms_.size(); ++i)
    os << (i ? ";" : "") << terms_[i].it << "," << terms_[i].ix << "," << terms_[i].iy << ","
       << terms_[i].c;
  os << "]";
  return os.str();
}

}  // namespace lamlab::solver
