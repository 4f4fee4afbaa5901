#pragma once

#include <array>
#include <string>
#include <vector>

#include "algdom/geom.hpp"
#include "algdom/interval.hpp"

namespace algdom {

// Dense univariate polynomial in one parameter, used for restrictions of
// bivariate polynomials to segments and fiber lines. Trailing zero
// coefficients are trimmed; the zero polynomial has degree -1.
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<double> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<double>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  // Largest coefficient magnitude (0 for the zero polynomial).
  double coeff_scale() const;

  double eval(double t) const;
  Interval eval_interval(const Interval& t) const;
  Poly1 derivative() const;

  std::string to_string() const;

 private:
  std::vector<double> c_;  // c_[k] is the coefficient of t^k
};

// Sparse bivariate polynomial. Terms are kept sorted by (j, i) and an
// internal dense row table (one row per y-power) makes Horner evaluation
// cheap and deterministic.
class Poly2 {
 public:
  struct Term {
    int i = 0;  // x exponent
    int j = 0;  // y exponent
    double c = 0.0;
  };

  Poly2() = default;
  explicit Poly2(std::vector<Term> terms);

  static Poly2 constant(double c);
  static Poly2 var_x();
  static Poly2 var_y();
  // a*x + b*y + c as a Poly2.
  static Poly2 line(double a, double b, double c);
  // Circle (x-cx)^2 + (y-cy)^2 - r^2.
  static Poly2 circle(double cx, double cy, double r);

  const std::vector<Term>& terms() const { return terms_; }
  int degree() const { return degree_; }  // max(i+j); -1 for zero polynomial
  bool is_zero() const { return terms_.empty(); }
  double coeff_scale() const;

  double eval(double x, double y) const;
  double eval(const Pt& p) const { return eval(p.x, p.y); }
  Interval eval_interval(const Interval& x, const Interval& y) const;

  Poly2 derivative(Axis axis, int order = 1) const;
  Poly2 dx() const { return derivative(Axis::X, 1); }
  Poly2 dy() const { return derivative(Axis::Y, 1); }
  Pt gradient(const Pt& p) const;

  // Restriction p((1-t)a + t b) as a polynomial in t. Throws
  // DegeneratePoints when a == b.
  Poly1 restrict_segment(const Pt& a, const Pt& b) const;

  Poly2 operator+(const Poly2& o) const;
  Poly2 operator-(const Poly2& o) const;
  Poly2 operator*(const Poly2& o) const;
  Poly2 operator*(double s) const;

  std::string to_string() const;

 private:
  void rebuild_cache();

  std::vector<Term> terms_;                 // sorted by (j, i), no zero coeffs
  int degree_ = -1;
  std::vector<std::vector<double>> rows_;   // rows_[j][i] dense coefficient
};

// Curvature numerator N(f) = f_y^2 f_xx - 2 f_x f_y f_xy + f_x^2 f_yy.
// Zero set of {f, N} on the curve gives inflection candidates.
Poly2 curvature_numerator(const Poly2& f);

// Numerator of d(kappa)/ds along the curve with tangent T = (-f_y, f_x):
//   M(f) = W * (grad N . T) - 3 N * (grad W . T) / ... collected polynomially:
//   M = W * (N_x*(-f_y) + N_y*f_x) - (3/2) * N * (W_x*(-f_y) + W_y*f_x)
// where W = f_x^2 + f_y^2. Zeros of {f, M} are curvature-critical points.
Poly2 curvature_derivative_numerator(const Poly2& f);

// Sparse polynomial in up to 4 variables; the system-solving currency.
class PolyN {
 public:
  struct Term {
    std::array<int, 4> e{};  // exponents, unused variables have exponent 0
    double c = 0.0;
  };

  PolyN() = default;
  PolyN(int nvars, std::vector<Term> terms);

  // Lift a Poly2 into n variables, mapping its x to variable var_x and its
  // y to variable var_y.
  static PolyN lift(const Poly2& p, int nvars, int var_x, int var_y);
  static PolyN constant(int nvars, double c);
  static PolyN variable(int nvars, int var);

  int nvars() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  double coeff_scale() const;

  double eval(const std::array<double, 4>& v) const;
  Interval eval_interval(const std::array<Interval, 4>& v) const;
  PolyN derivative(int var) const;

  PolyN operator+(const PolyN& o) const;
  PolyN operator-(const PolyN& o) const;
  PolyN operator*(const PolyN& o) const;
  PolyN operator*(double s) const;

 private:
  int n_ = 0;
  std::vector<Term> terms_;  // sorted lexicographically by exponent tuple
};

}  // namespace algdom
