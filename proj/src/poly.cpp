#include "algdom/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "algdom/errors.hpp"

namespace algdom {

namespace {

// Dense polynomial-in-t helpers used by restrict_segment. Coefficient
// vectors follow the Poly1 convention (index = power of t).
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> r(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

void poly_add_scaled(std::vector<double>& acc, const std::vector<double>& a, double s) {
  if (acc.size() < a.size()) acc.resize(a.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i) acc[i] += s * a[i];
}

}  // namespace

// ---------------------------------------------------------------------------
// Poly1

Poly1::Poly1(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Poly1::coeff_scale() const {
  double s = 0.0;
  for (double c : c_) s = std::max(s, std::fabs(c));
  return s;
}

double Poly1::eval(double t) const {
  double acc = 0.0;
  for (size_t k = c_.size(); k-- > 0;) acc = acc * t + c_[k];
  return acc;
}

Interval Poly1::eval_interval(const Interval& t) const {
  Interval acc(0.0);
  for (size_t k = c_.size(); k-- > 0;) acc = acc * t + Interval(c_[k]);
  return acc;
}

Poly1 Poly1::derivative() const {
  if (c_.size() <= 1) return Poly1();
  std::vector<double> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return Poly1(std::move(d));
}

std::string Poly1::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  char buf[64];
  for (size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0.0) continue;
    std::snprintf(buf, sizeof(buf), "%s%.12g*t^%zu", s.empty() ? "" : " + ", c_[k], k);
    s += buf;
  }
  return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------
// Poly2

Poly2::Poly2(std::vector<Term> terms) {
  std::map<std::pair<int, int>, double> acc;  // key (j, i)
  for (const Term& t : terms) {
    if (t.i < 0 || t.j < 0)
      throw Error(ErrorCode::ParseError, "negative exponent in Poly2 term");
    acc[{t.j, t.i}] += t.c;
  }
  for (const auto& [key, c] : acc) {
    if (c != 0.0) terms_.push_back({key.second, key.first, c});
  }
  rebuild_cache();
}

void Poly2::rebuild_cache() {
  degree_ = -1;
  rows_.clear();
  int max_j = -1;
  for (const Term& t : terms_) {
    degree_ = std::max(degree_, t.i + t.j);
    max_j = std::max(max_j, t.j);
  }
  rows_.resize(static_cast<size_t>(max_j + 1));
  for (const Term& t : terms_) {
    auto& row = rows_[static_cast<size_t>(t.j)];
    if (row.size() <= static_cast<size_t>(t.i)) row.resize(static_cast<size_t>(t.i) + 1, 0.0);
    row[static_cast<size_t>(t.i)] = t.c;
  }
}

Poly2 Poly2::constant(double c) { return Poly2({{0, 0, c}}); }
Poly2 Poly2::var_x() { return Poly2({{1, 0, 1.0}}); }
Poly2 Poly2::var_y() { return Poly2({{0, 1, 1.0}}); }

Poly2 Poly2::line(double a, double b, double c) {
  return Poly2({{1, 0, a}, {0, 1, b}, {0, 0, c}});
}

Poly2 Poly2::circle(double cx, double cy, double r) {
  return Poly2({{2, 0, 1.0},
                {0, 2, 1.0},
                {1, 0, -2.0 * cx},
                {0, 1, -2.0 * cy},
                {0, 0, cx * cx + cy * cy - r * r}});
}

double Poly2::coeff_scale() const {
  double s = 0.0;
  for (const Term& t : terms_) s = std::max(s, std::fabs(t.c));
  return s;
}

double Poly2::eval(double x, double y) const {
  double acc = 0.0;
  for (size_t j = rows_.size(); j-- > 0;) {
    double row = 0.0;
    const auto& r = rows_[j];
    for (size_t i = r.size(); i-- > 0;) row = row * x + r[i];
    acc = acc * y + row;
  }
  return acc;
}

Interval Poly2::eval_interval(const Interval& x, const Interval& y) const {
  Interval acc(0.0);
  for (size_t j = rows_.size(); j-- > 0;) {
    Interval row(0.0);
    const auto& r = rows_[j];
    for (size_t i = r.size(); i-- > 0;) row = row * x + Interval(r[i]);
    acc = acc * y + row;
  }
  return acc;
}

Poly2 Poly2::derivative(Axis axis, int order) const {
  if (order < 1) throw Error(ErrorCode::ParseError, "derivative order must be >= 1");
  std::vector<Term> cur = terms_;
  for (int o = 0; o < order; ++o) {
    std::vector<Term> next;
    next.reserve(cur.size());
    for (const Term& t : cur) {
      if (axis == Axis::X) {
        if (t.i >= 1) next.push_back({t.i - 1, t.j, t.c * t.i});
      } else {
        if (t.j >= 1) next.push_back({t.i, t.j - 1, t.c * t.j});
      }
    }
    cur = std::move(next);
  }
  return Poly2(std::move(cur));
}

Pt Poly2::gradient(const Pt& p) const {
  return {derivative(Axis::X).eval(p), derivative(Axis::Y).eval(p)};
}

Poly1 Poly2::restrict_segment(const Pt& a, const Pt& b) const {
  if (a.x == b.x && a.y == b.y)
    throw Error(ErrorCode::DegeneratePoints, "restrict_segment endpoints coincide");
  const std::vector<double> xt = {a.x, b.x - a.x};
  const std::vector<double> yt = {a.y, b.y - a.y};
  // Horner over rows: result = sum_j row_j(x(t)) * y(t)^j, evaluated as
  // nested polynomial arithmetic in t.
  std::vector<double> acc;
  for (size_t j = rows_.size(); j-- > 0;) {
    std::vector<double> row;
    const auto& r = rows_[j];
    for (size_t i = r.size(); i-- > 0;) {
      row = poly_mul(row, xt);
      poly_add_scaled(row, {r[i]}, 1.0);
    }
    acc = poly_mul(acc, yt);
    poly_add_scaled(acc, row, 1.0);
  }
  return Poly1(std::move(acc));
}

Poly2 Poly2::operator+(const Poly2& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return Poly2(std::move(all));
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * -1.0; }

Poly2 Poly2::operator*(const Poly2& o) const {
  std::map<std::pair<int, int>, double> acc;
  for (const Term& s : terms_)
    for (const Term& t : o.terms_) acc[{s.j + t.j, s.i + t.i}] += s.c * t.c;
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [key, c] : acc)
    if (c != 0.0) out.push_back({key.second, key.first, c});
  return Poly2(std::move(out));
}

Poly2 Poly2::operator*(double s) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.c *= s;
  return Poly2(std::move(out));
}

std::string Poly2::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  char buf[96];
  for (const Term& t : terms_) {
    std::snprintf(buf, sizeof(buf), "%s%.12g*x^%d*y^%d", s.empty() ? "" : " + ", t.c, t.i, t.j);
    s += buf;
  }
  return s;
}

Poly2 curvature_numerator(const Poly2& f) {
  Poly2 fx = f.dx(), fy = f.dy();
  Poly2 fxx = fx.dx(), fxy = fx.dy(), fyy = fy.dy();
  return fy * fy * fxx - fx * fy * fxy * 2.0 + fx * fx * fyy;
}

Poly2 curvature_derivative_numerator(const Poly2& f) {
  Poly2 fx = f.dx(), fy = f.dy();
  Poly2 n = curvature_numerator(f);
  Poly2 w = fx * fx + fy * fy;
  Poly2 nt = n.dx() * (fy * -1.0) + n.dy() * fx;   // grad N . T
  Poly2 wt = w.dx() * (fy * -1.0) + w.dy() * fx;   // grad W . T
  return w * nt - n * wt * 1.5;
}

// ---------------------------------------------------------------------------
// PolyN

PolyN::PolyN(int nvars, std::vector<Term> terms) : n_(nvars) {
  if (nvars < 1 || nvars > 4)
    throw Error(ErrorCode::ParseError, "PolyN supports 1..4 variables");
  std::map<std::array<int, 4>, double> acc;
  for (const Term& t : terms) acc[t.e] += t.c;
  for (const auto& [e, c] : acc)
    if (c != 0.0) terms_.push_back({e, c});
}

PolyN PolyN::lift(const Poly2& p, int nvars, int var_x, int var_y) {
  std::vector<Term> out;
  out.reserve(p.terms().size());
  for (const Poly2::Term& t : p.terms()) {
    Term nt;
    nt.e[static_cast<size_t>(var_x)] += t.i;
    nt.e[static_cast<size_t>(var_y)] += t.j;
    nt.c = t.c;
    out.push_back(nt);
  }
  return PolyN(nvars, std::move(out));
}

PolyN PolyN::constant(int nvars, double c) {
  return PolyN(nvars, {{std::array<int, 4>{0, 0, 0, 0}, c}});
}

PolyN PolyN::variable(int nvars, int var) {
  Term t;
  t.e[static_cast<size_t>(var)] = 1;
  t.c = 1.0;
  return PolyN(nvars, {t});
}

double PolyN::coeff_scale() const {
  double s = 0.0;
  for (const Term& t : terms_) s = std::max(s, std::fabs(t.c));
  return s;
}

double PolyN::eval(const std::array<double, 4>& v) const {
  // Power tables per variable keep evaluation O(terms) after setup.
  std::array<int, 4> maxe{};
  for (const Term& t : terms_)
    for (int k = 0; k < n_; ++k) maxe[static_cast<size_t>(k)] = std::max(maxe[static_cast<size_t>(k)], t.e[static_cast<size_t>(k)]);
  std::array<std::vector<double>, 4> pw;
  for (int k = 0; k < n_; ++k) {
    auto& p = pw[static_cast<size_t>(k)];
    p.resize(static_cast<size_t>(maxe[static_cast<size_t>(k)]) + 1);
    p[0] = 1.0;
    for (size_t e = 1; e < p.size(); ++e) p[e] = p[e - 1] * v[static_cast<size_t>(k)];
  }
  double acc = 0.0;
  for (const Term& t : terms_) {
    double m = t.c;
    for (int k = 0; k < n_; ++k) m *= pw[static_cast<size_t>(k)][static_cast<size_t>(t.e[static_cast<size_t>(k)])];
    acc += m;
  }
  return acc;
}

Interval PolyN::eval_interval(const std::array<Interval, 4>& v) const {
  std::array<int, 4> maxe{};
  for (const Term& t : terms_)
    for (int k = 0; k < n_; ++k) maxe[static_cast<size_t>(k)] = std::max(maxe[static_cast<size_t>(k)], t.e[static_cast<size_t>(k)]);
  std::array<std::vector<Interval>, 4> pw;
  for (int k = 0; k < n_; ++k) {
    auto& p = pw[static_cast<size_t>(k)];
    p.resize(static_cast<size_t>(maxe[static_cast<size_t>(k)]) + 1);
    p[0] = Interval(1.0);
    for (size_t e = 1; e < p.size(); ++e)
      p[e] = ipow(v[static_cast<size_t>(k)], static_cast<int>(e));
  }
  Interval acc(0.0);
  for (const Term& t : terms_) {
    Interval m(t.c);
    for (int k = 0; k < n_; ++k) m = m * pw[static_cast<size_t>(k)][static_cast<size_t>(t.e[static_cast<size_t>(k)])];
    acc = acc + m;
  }
  return acc;
}

PolyN PolyN::derivative(int var) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_) {
    int e = t.e[static_cast<size_t>(var)];
    if (e >= 1) {
      Term nt = t;
      nt.e[static_cast<size_t>(var)] = e - 1;
      nt.c = t.c * e;
      out.push_back(nt);
    }
  }
  return PolyN(n_, std::move(out));
}

PolyN PolyN::operator+(const PolyN& o) const {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return PolyN(std::max(n_, o.n_), std::move(all));
}

PolyN PolyN::operator-(const PolyN& o) const { return *this + o * -1.0; }

PolyN PolyN::operator*(const PolyN& o) const {
  std::map<std::array<int, 4>, double> acc;
  for (const Term& s : terms_)
    for (const Term& t : o.terms_) {
      std::array<int, 4> e{};
      for (int k = 0; k < 4; ++k) e[static_cast<size_t>(k)] = s.e[static_cast<size_t>(k)] + t.e[static_cast<size_t>(k)];
      acc[e] += s.c * t.c;
    }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (const auto& [e, c] : acc)
    if (c != 0.0) out.push_back({e, c});
  return PolyN(std::max(n_, o.n_), std::move(out));
}

PolyN PolyN::operator*(double s) const {
  std::vector<Term> out = terms_;
  for (Term& t : out) t.c *= s;
  return PolyN(n_, std::move(out));
}

}  // namespace algdom
