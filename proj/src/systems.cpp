#include "algdom/systems.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "algdom/errors.hpp"
#include "algdom/interval.hpp"

namespace algdom {

namespace {

using Vec = std::array<double, 4>;
using IVec = std::array<Interval, 4>;
using Mat = std::array<std::array<double, 4>, 4>;
using IMat = std::array<std::array<Interval, 4>, 4>;

double system_scale(const std::vector<PolyN>& eqs) {
  double s = 0.0;
  for (const PolyN& e : eqs) s = std::max(s, e.coeff_scale());
  return s;
}

// Invert an n x n matrix by Gauss-Jordan with partial pivoting. Returns
// false when a pivot falls below the degeneracy floor.
bool invert(const Mat& a_in, int n, Mat& out) {
  Mat a = a_in;
  Mat inv{};
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-14) return false;
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    double d = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  out = inv;
  return true;
}

bool solve_linear(const Mat& a_in, const Vec& b_in, int n, Vec& out) {
  Mat a = a_in;
  Vec b = b_in;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-14) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * out[c];
    out[r] = s / a[r][r];
  }
  return true;
}

struct Work {
  BoxN box;
};

struct KrawczykOutcome {
  bool inside = false;
  bool disjoint = false;
};

// One Krawczyk contraction test on a box. Every term of
// K = m - Y F(m) + (I - Y J(X))(X - m) is accumulated in interval
// arithmetic; Y itself may be any fixed matrix, but the rounding of
// Y * F(m) must be enclosed or near-singular Y yields false certificates.
KrawczykOutcome krawczyk_test(const std::vector<PolyN>& eqs,
                              const std::vector<std::vector<PolyN>>& jac,
                              int n, const BoxN& box) {
  KrawczykOutcome res;
  IVec xi{};
  for (int i = 0; i < n; ++i)
    xi[static_cast<size_t>(i)] = Interval(box.lo[static_cast<size_t>(i)], box.hi[static_cast<size_t>(i)]);
  Vec m{};
  for (int i = 0; i < n; ++i)
    m[static_cast<size_t>(i)] = 0.5 * (box.lo[static_cast<size_t>(i)] + box.hi[static_cast<size_t>(i)]);
  IVec mi{};
  for (int i = 0; i < n; ++i) mi[static_cast<size_t>(i)] = Interval(m[static_cast<size_t>(i)]);
  IVec fm{};
  for (int i = 0; i < n; ++i) fm[static_cast<size_t>(i)] = eqs[static_cast<size_t>(i)].eval_interval(mi);
  Mat jm{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jm[static_cast<size_t>(i)][static_cast<size_t>(j)] = jac[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(m);
  Mat y{};
  if (!invert(jm, n, y)) return res;

  IMat jx{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jx[static_cast<size_t>(i)][static_cast<size_t>(j)] = jac[static_cast<size_t>(i)][static_cast<size_t>(j)].eval_interval(xi);
  bool inside = true, disjoint = false;
  for (int i = 0; i < n; ++i) {
    Interval acc(0.0);
    for (int j = 0; j < n; ++j) {
      Interval b(i == j ? 1.0 : 0.0);
      for (int k = 0; k < n; ++k)
        b = b - Interval(y[static_cast<size_t>(i)][static_cast<size_t>(k)]) * jx[static_cast<size_t>(k)][static_cast<size_t>(j)];
      acc = acc + b * (xi[static_cast<size_t>(j)] - mi[static_cast<size_t>(j)]);
    }
    Interval yf(0.0);
    for (int j = 0; j < n; ++j)
      yf = yf + Interval(y[static_cast<size_t>(i)][static_cast<size_t>(j)]) * fm[static_cast<size_t>(j)];
    Interval k = mi[static_cast<size_t>(i)] - yf + acc;
    if (!k.inside_interior(xi[static_cast<size_t>(i)])) inside = false;
    if (k.disjoint(xi[static_cast<size_t>(i)])) disjoint = true;
  }
  res.inside = inside && !disjoint;
  res.disjoint = disjoint;
  return res;
}

}  // namespace

std::vector<CertifiedPoint> solve_system(const std::vector<PolyN>& eqs,
                                         const BoxN& box, double tol,
                                         const SolveOptions& opts) {
  const int n = box.n;
  if (n < 1 || n > 4 || static_cast<int>(eqs.size()) != n)
    throw Error(ErrorCode::ParseError, "solve_system needs n equations in n variables, 1<=n<=4");
  if (!(tol > 0.0)) throw Error(ErrorCode::ParseError, "tol must be positive");

  std::vector<std::vector<PolyN>> jac(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jac[static_cast<size_t>(i)].push_back(eqs[static_cast<size_t>(i)].derivative(j));

  std::deque<Work> queue;
  queue.push_back({box});
  long budget = opts.budget;
  double initial_widest = box.widest();

  std::vector<CertifiedPoint> found;
  std::vector<Vec> clusters;

  while (!queue.empty()) {
    if (--budget < 0) throw Error(ErrorCode::BudgetExceeded, "subdivision budget exhausted");
    Work w = queue.front();
    queue.pop_front();

    IVec xi{};
    for (int i = 0; i < n; ++i) xi[static_cast<size_t>(i)] = Interval(w.box.lo[static_cast<size_t>(i)], w.box.hi[static_cast<size_t>(i)]);

    // Exclusion: an equation whose interval enclosure misses zero kills the box.
    bool excluded = false;
    for (const PolyN& e : eqs) {
      if (!e.eval_interval(xi).contains_zero()) {
        excluded = true;
        break;
      }
    }
    if (excluded) continue;

    if (w.box.widest() < opts.cluster_size) {
      Vec m{};
      for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)] = 0.5 * (w.box.lo[static_cast<size_t>(i)] + w.box.hi[static_cast<size_t>(i)]);
      clusters.push_back(m);
      continue;
    }

    KrawczykOutcome ko = krawczyk_test(eqs, jac, n, w.box);
    if (ko.disjoint) continue;
    if (ko.inside) {
      Vec m{};
      for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)] = 0.5 * (w.box.lo[static_cast<size_t>(i)] + w.box.hi[static_cast<size_t>(i)]);
      CertifiedPoint cp = polish_newton(eqs, m, tol);
      cp.radius = 0.5 * w.box.widest();
      found.push_back(cp);
      continue;
    }

    // A root sitting exactly on a subdivision edge never certifies from
    // either side; once boxes are small, polish from the midpoint and
    // re-test a recentered box that covers this one. A certified
    // recentered box proves this box holds no other root.
    if (w.box.widest() <= 0.05 * initial_widest) {
      Vec m{};
      for (int i = 0; i < n; ++i) m[static_cast<size_t>(i)] = 0.5 * (w.box.lo[static_cast<size_t>(i)] + w.box.hi[static_cast<size_t>(i)]);
      bool recentered_ok = false;
      try {
        CertifiedPoint cp = polish_newton(eqs, m, tol);
        BoxN rb = w.box;
        bool covers = true;
        for (int i = 0; i < n; ++i) {
          double half = 1.5 * (w.box.hi[static_cast<size_t>(i)] - w.box.lo[static_cast<size_t>(i)]);
          rb.lo[static_cast<size_t>(i)] = cp.x[static_cast<size_t>(i)] - half;
          rb.hi[static_cast<size_t>(i)] = cp.x[static_cast<size_t>(i)] + half;
          if (rb.lo[static_cast<size_t>(i)] > w.box.lo[static_cast<size_t>(i)] ||
              rb.hi[static_cast<size_t>(i)] < w.box.hi[static_cast<size_t>(i)])
            covers = false;
        }
        if (covers && krawczyk_test(eqs, jac, n, rb).inside) {
          cp.radius = 0.5 * rb.widest();
          found.push_back(cp);
          recentered_ok = true;
        }
      } catch (const Error&) {
        // polish failed; fall through to subdivision
      }
      if (recentered_ok) continue;
    }

    int d = w.box.widest_dim();
    double mid = 0.5 * (w.box.lo[static_cast<size_t>(d)] + w.box.hi[static_cast<size_t>(d)]);
    Work a = w, c = w;
    a.box.hi[static_cast<size_t>(d)] = mid;
    c.box.lo[static_cast<size_t>(d)] = mid;
    queue.push_back(a);
    queue.push_back(c);
  }

  auto lex_less = [n](const Vec& a, const Vec& b) {
    for (int i = 0; i < n; ++i) {
      if (a[static_cast<size_t>(i)] < b[static_cast<size_t>(i)]) return true;
      if (a[static_cast<size_t>(i)] > b[static_cast<size_t>(i)]) return false;
    }
    return false;
  };

  std::sort(found.begin(), found.end(),
            [&](const CertifiedPoint& a, const CertifiedPoint& b) { return lex_less(a.x, b.x); });
  std::vector<CertifiedPoint> dedup;
  for (const CertifiedPoint& cp : found) {
    bool close = false;
    for (const CertifiedPoint& k : dedup) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = cp.x[static_cast<size_t>(i)] - k.x[static_cast<size_t>(i)];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= std::max(tol, 2.0 * opts.cluster_size)) {
        close = true;
        break;
      }
    }
    if (!close) dedup.push_back(cp);
  }

  // Cluster reps: merge near-identical ones, drop any explained by a
  // certified root nearby.
  std::sort(clusters.begin(), clusters.end(), lex_less);
  std::vector<Vec> cluster_reps;
  for (const Vec& c : clusters) {
    bool close = false;
    for (const Vec& k : cluster_reps) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = c[static_cast<size_t>(i)] - k[static_cast<size_t>(i)];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= 100.0 * opts.cluster_size) close = true;
    }
    for (const CertifiedPoint& k : dedup) {
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        double d = c[static_cast<size_t>(i)] - k.x[static_cast<size_t>(i)];
        d2 += d * d;
      }
      if (std::sqrt(d2) <= std::max(tol, 10.0 * opts.cluster_size)) close = true;
    }
    if (!close) cluster_reps.push_back(c);
  }

  if (!cluster_reps.empty()) {
    if (!opts.collect_clusters) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "unresolvable solution cluster near (%.12g, %.12g)",
                    cluster_reps[0][0], cluster_reps[0][1]);
      throw Error(ErrorCode::SingularCluster, buf);
    }
    for (const Vec& c : cluster_reps) {
      CertifiedPoint cp;
      cp.n = n;
      cp.x = c;
      cp.radius = opts.cluster_size;
      double res = 0.0;
      for (const PolyN& e : eqs) res = std::max(res, std::fabs(e.eval(c)));
      cp.residual = res;
      cp.certified = false;
      dedup.push_back(cp);
    }
  }
  return dedup;
}

CertifiedPoint polish_newton(const std::vector<PolyN>& eqs,
                             const std::array<double, 4>& start, double tol,
                             int max_iter) {
  const int n = static_cast<int>(eqs.size());
  if (n < 1 || n > 4) throw Error(ErrorCode::ParseError, "polish_newton needs 1..4 equations");
  double thresh = tol * std::max(1.0, system_scale(eqs));

  std::vector<std::vector<PolyN>> jac(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      jac[static_cast<size_t>(i)].push_back(eqs[static_cast<size_t>(i)].derivative(j));

  Vec x = start;
  double last_step = tol;
  for (int iter = 0; iter < max_iter; ++iter) {
    Vec f{};
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      f[static_cast<size_t>(i)] = eqs[static_cast<size_t>(i)].eval(x);
      res = std::max(res, std::fabs(f[static_cast<size_t>(i)]));
    }
    if (res <= thresh) {
      CertifiedPoint cp;
      cp.n = n;
      cp.x = x;
      cp.radius = std::max(last_step, tol);
      cp.residual = res;
      return cp;
    }
    Mat jm{};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) jm[static_cast<size_t>(i)][static_cast<size_t>(j)] = jac[static_cast<size_t>(i)][static_cast<size_t>(j)].eval(x);
    Vec rhs{};
    for (int i = 0; i < n; ++i) rhs[static_cast<size_t>(i)] = -f[static_cast<size_t>(i)];
    Vec d{};
    if (!solve_linear(jm, rhs, n, d))
      throw Error(ErrorCode::SingularJacobian, "Jacobian singular during Newton polish");
    // Damping: insist on residual decrease.
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 24; ++half) {
      Vec xn = x;
      for (int i = 0; i < n; ++i) xn[static_cast<size_t>(i)] += lambda * d[static_cast<size_t>(i)];
      double rn = 0.0;
      for (int i = 0; i < n; ++i) rn = std::max(rn, std::fabs(eqs[static_cast<size_t>(i)].eval(xn)));
      if (rn < res) {
        double step = 0.0;
        for (int i = 0; i < n; ++i) step = std::max(step, std::fabs(lambda * d[static_cast<size_t>(i)]));
        last_step = step;
        x = xn;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) throw Error(ErrorCode::Diverged, "Newton polish failed to reduce residual");
  }
  throw Error(ErrorCode::Diverged, "Newton polish did not converge within iteration limit");
}

}  // namespace algdom
