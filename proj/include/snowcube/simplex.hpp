#pragma once

// Dense two-phase simplex over doubles, plus an exact verification pass in
// rational arithmetic. The rational pass rebuilds the standard form with
// every double converted to its exact binary rational, re-derives the final
// basis, and either certifies optimality (feasibility + nonnegative reduced
// costs) or continues pivoting with Bland's rule until it can. Certificates
// are therefore exact statements about the LP actually posed.
//
// The templated core is shared between the two number types; tolerances are
// zero in the rational instantiation.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace snowcube::lp {

using Rational = boost::multiprecision::cpp_rational;

enum class Rel { le, ge, eq };

struct Row {
  std::vector<double> a;
  Rel rel = Rel::le;
  double b = 0.0;
};

// minimize c.x  subject to rows, x >= 0
struct Problem {
  int nvars = 0;
  std::vector<double> c;
  std::vector<Row> rows;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
  Status status = Status::iteration_limit;
  double value = 0.0;
  std::vector<double> x;     // structural variables only
  std::vector<int> basis;    // standard-form column per row
  int iterations = 0;
  bool rows_removed = false; // redundant rows dropped in phase 1
};

namespace detail {

template <class T>
struct Scalar {
  static T from(double v) { return T(v); }  // exact for Rational
};

template <class T>
struct StandardForm {
  int m = 0;                 // rows
  int ncols = 0;             // structural + slack columns
  int nstruct = 0;
  std::vector<std::vector<T>> a;  // m x ncols
  std::vector<T> b;               // >= 0 after normalization
  std::vector<T> c;               // ncols, slack costs are zero
  std::vector<int> slack_col;     // per row, -1 if eq
};

template <class T>
StandardForm<T> build_standard_form(const Problem& p) {
  StandardForm<T> f;
  f.m = static_cast<int>(p.rows.size());
  f.nstruct = p.nvars;
  int nslack = 0;
  for (const auto& r : p.rows)
    if (r.rel != Rel::eq) ++nslack;
  f.ncols = p.nvars + nslack;
  f.a.assign(f.m, std::vector<T>(f.ncols, T(0)));
  f.b.resize(f.m);
  f.c.assign(f.ncols, T(0));
  for (int j = 0; j < p.nvars; ++j) f.c[j] = Scalar<T>::from(p.c[j]);
  f.slack_col.assign(f.m, -1);

  int next_slack = p.nvars;
  for (int i = 0; i < f.m; ++i) {
    const Row& r = p.rows[i];
    if (static_cast<int>(r.a.size()) != p.nvars)
      throw std::invalid_argument("lp: row width mismatch");
    const bool flip = r.b < 0.0;
    Rel rel = r.rel;
    if (flip && rel == Rel::le) rel = Rel::ge;
    else if (flip && rel == Rel::ge) rel = Rel::le;
    for (int j = 0; j < p.nvars; ++j)
      f.a[i][j] = Scalar<T>::from(flip ? -r.a[j] : r.a[j]);
    f.b[i] = Scalar<T>::from(flip ? -r.b : r.b);
    if (rel != Rel::eq) {
      f.a[i][next_slack] = (rel == Rel::le) ? T(1) : T(-1);
      f.slack_col[i] = next_slack;
      ++next_slack;
    }
  }
  return f;
}

// Tableau with explicit objective row; columns [0, ncols) plus rhs.
template <class T>
struct Tableau {
  int m = 0, ncols = 0;
  std::vector<std::vector<T>> t;  // m rows of ncols+1 (last is rhs)
  std::vector<T> obj;             // ncols+1 (last is -objective value)
  std::vector<int> basis;

  void pivot(int pr, int pc) {
    const T piv = t[pr][pc];
    for (auto& v : t[pr]) v /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == pr) continue;
      const T factor = t[r][pc];
      if (factor == 0) continue;
      for (int j = 0; j <= ncols; ++j) t[r][j] -= factor * t[pr][j];
    }
    const T of = obj[pc];
    if (of != 0)
      for (int j = 0; j <= ncols; ++j) obj[j] -= of * t[pr][j];
    basis[pr] = pc;
  }
};

inline bool is_negative(const double& v, double eps) { return v < -eps; }
inline bool is_negative(const Rational& v, double) { return v < 0; }
inline bool is_positive(const double& v, double eps) { return v > eps; }
inline bool is_positive(const Rational& v, double) { return v > 0; }

// Returns optimal/unbounded/iteration_limit. `allowed` bounds the entering
// column search (used to exclude artificial columns in phase 2).
template <class T>
Status primal_simplex(Tableau<T>& tab, int allowed, bool bland, double eps,
                      long max_iter, int* iters_out) {
  long stall = 0;
  T last_obj = tab.obj[tab.ncols];
  for (long it = 0; it < max_iter; ++it) {
    // entering column
    int pc = -1;
    if (bland || stall > 2 * tab.m + 16) {
      for (int j = 0; j < allowed; ++j)
        if (is_negative(tab.obj[j], eps)) { pc = j; break; }
    } else {
      T best(0);
      for (int j = 0; j < allowed; ++j)
        if (is_negative(tab.obj[j], eps) && tab.obj[j] < best) {
          best = tab.obj[j];
          pc = j;
        }
    }
    if (pc < 0) {
      if (iters_out) *iters_out += static_cast<int>(it);
      return Status::optimal;
    }
    // ratio test; ties to the smallest basis index for determinism
    int pr = -1;
    T best_ratio(0);
    for (int r = 0; r < tab.m; ++r) {
      if (!is_positive(tab.t[r][pc], eps)) continue;
      T ratio = tab.t[r][tab.ncols] / tab.t[r][pc];
      if (pr < 0 || ratio < best_ratio ||
          (ratio == best_ratio && tab.basis[r] < tab.basis[pr])) {
        pr = r;
        best_ratio = ratio;
      }
    }
    if (pr < 0) {
      if (iters_out) *iters_out += static_cast<int>(it);
      return Status::unbounded;
    }
    tab.pivot(pr, pc);
    if (tab.obj[tab.ncols] == last_obj) ++stall; else { stall = 0; last_obj = tab.obj[tab.ncols]; }
  }
  if (iters_out) *iters_out += static_cast<int>(max_iter);
  return Status::iteration_limit;
}

}  // namespace detail

struct SolveOptions {
  double eps = 1e-9;
  long max_iterations = 0;  // 0: automatic
};

inline Solution solve(const Problem& p, const SolveOptions& opt = {}) {
  using detail::Tableau;
  auto f = detail::build_standard_form<double>(p);
  const int m = f.m;
  long max_iter = opt.max_iterations > 0
                      ? opt.max_iterations
                      : 2000 + 64L * (m + f.ncols);

  // artificial columns where a slack cannot seed the basis
  std::vector<int> art_col(m, -1);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (f.slack_col[i] < 0 || f.a[i][f.slack_col[i]] != 1.0) art_col[i] = nart++;

  Tableau<double> tab;
  tab.m = m;
  tab.ncols = f.ncols + nart;
  tab.t.assign(m, std::vector<double>(tab.ncols + 1, 0.0));
  tab.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < f.ncols; ++j) tab.t[i][j] = f.a[i][j];
    tab.t[i][tab.ncols] = f.b[i];
    if (art_col[i] >= 0) {
      tab.t[i][f.ncols + art_col[i]] = 1.0;
      tab.basis[i] = f.ncols + art_col[i];
    } else {
      tab.basis[i] = f.slack_col[i];
    }
  }

  Solution sol;
  sol.iterations = 0;

  if (nart > 0) {
    // phase 1: minimize the sum of artificials
    tab.obj.assign(tab.ncols + 1, 0.0);
    for (int i = 0; i < m; ++i)
      if (art_col[i] >= 0)
        for (int j = 0; j <= tab.ncols; ++j) tab.obj[j] -= tab.t[i][j];
    for (int i = 0; i < m; ++i)
      if (art_col[i] >= 0) tab.obj[f.ncols + art_col[i]] = 0.0;
    auto st1 = detail::primal_simplex(tab, tab.ncols, false, opt.eps, max_iter,
                                      &sol.iterations);
    if (st1 == Status::iteration_limit) { sol.status = st1; return sol; }
    if (-tab.obj[tab.ncols] > 1e-7) { sol.status = Status::infeasible; return sol; }
    // drive artificials out of the basis
    std::vector<int> keep;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < f.ncols) { keep.push_back(i); continue; }
      int pc = -1;
      for (int j = 0; j < f.ncols; ++j)
        if (std::abs(tab.t[i][j]) > 1e-7) { pc = j; break; }
      if (pc >= 0) {
        tab.pivot(i, pc);
        keep.push_back(i);
      } else {
        sol.rows_removed = true;  // redundant row
      }
    }
    if (sol.rows_removed) {
      std::vector<std::vector<double>> nt;
      std::vector<int> nb;
      for (int i : keep) {
        nt.push_back(std::move(tab.t[i]));
        nb.push_back(tab.basis[i]);
      }
      tab.t = std::move(nt);
      tab.basis = std::move(nb);
      tab.m = static_cast<int>(tab.t.size());
    }
  }

  // phase 2 objective from original costs
  tab.obj.assign(tab.ncols + 1, 0.0);
  for (int j = 0; j < f.ncols; ++j) tab.obj[j] = f.c[j];
  for (int i = 0; i < tab.m; ++i) {
    const double cb = tab.basis[i] < f.ncols ? f.c[tab.basis[i]] : 0.0;
    if (cb != 0.0)
      for (int j = 0; j <= tab.ncols; ++j) tab.obj[j] -= cb * tab.t[i][j];
  }
  auto st2 = detail::primal_simplex(tab, f.ncols, false, opt.eps, max_iter,
                                    &sol.iterations);
  sol.status = st2;
  if (st2 != Status::optimal) return sol;

  sol.x.assign(p.nvars, 0.0);
  for (int i = 0; i < tab.m; ++i)
    if (tab.basis[i] < p.nvars) sol.x[tab.basis[i]] = tab.t[i][tab.ncols];
  double v = 0.0;
  for (int j = 0; j < p.nvars; ++j) v += p.c[j] * sol.x[j];
  sol.value = v;
  sol.basis = tab.basis;
  return sol;
}

// --- exact rational pass -----------------------------------------------------

struct RationalResult {
  bool ok = false;            // exact optimum obtained
  bool refined_from_basis = true;  // false if a from-scratch exact solve was needed
  int pivots = 0;             // extra pivots beyond the double basis
  Rational value;
  std::vector<Rational> x;    // structural variables
  Status status = Status::iteration_limit;
};

namespace detail {

inline RationalResult solve_exact(const Problem& p, long max_iter) {
  auto f = build_standard_form<Rational>(p);
  const int m = f.m;

  std::vector<int> art_col(m, -1);
  int nart = 0;
  for (int i = 0; i < m; ++i)
    if (f.slack_col[i] < 0 || f.a[i][f.slack_col[i]] != 1) art_col[i] = nart++;

  Tableau<Rational> tab;
  tab.m = m;
  tab.ncols = f.ncols + nart;
  tab.t.assign(m, std::vector<Rational>(tab.ncols + 1, Rational(0)));
  tab.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < f.ncols; ++j) tab.t[i][j] = f.a[i][j];
    tab.t[i][tab.ncols] = f.b[i];
    if (art_col[i] >= 0) {
      tab.t[i][f.ncols + art_col[i]] = 1;
      tab.basis[i] = f.ncols + art_col[i];
    } else {
      tab.basis[i] = f.slack_col[i];
    }
  }

  RationalResult res;
  res.refined_from_basis = false;
  int iters = 0;

  if (nart > 0) {
    tab.obj.assign(tab.ncols + 1, Rational(0));
    for (int i = 0; i < m; ++i)
      if (art_col[i] >= 0)
        for (int j = 0; j <= tab.ncols; ++j) tab.obj[j] -= tab.t[i][j];
    for (int i = 0; i < m; ++i)
      if (art_col[i] >= 0) tab.obj[f.ncols + art_col[i]] = 0;
    auto st1 = primal_simplex(tab, tab.ncols, true, 0.0, max_iter, &iters);
    if (st1 != Status::optimal) { res.status = st1; return res; }
    if (tab.obj[tab.ncols] != 0) { res.status = Status::infeasible; return res; }
    std::vector<int> keep;
    for (int i = 0; i < tab.m; ++i) {
      if (tab.basis[i] < f.ncols) { keep.push_back(i); continue; }
      int pc = -1;
      for (int j = 0; j < f.ncols; ++j)
        if (tab.t[i][j] != 0) { pc = j; break; }
      if (pc >= 0) {
        tab.pivot(i, pc);
        keep.push_back(i);
      }
    }
    if (static_cast<int>(keep.size()) != tab.m) {
      std::vector<std::vector<Rational>> nt;
      std::vector<int> nb;
      for (int i : keep) {
        nt.push_back(std::move(tab.t[i]));
        nb.push_back(tab.basis[i]);
      }
      tab.t = std::move(nt);
      tab.basis = std::move(nb);
      tab.m = static_cast<int>(tab.t.size());
    }
  }

  tab.obj.assign(tab.ncols + 1, Rational(0));
  for (int j = 0; j < f.ncols; ++j) tab.obj[j] = f.c[j];
  for (int i = 0; i < tab.m; ++i) {
    const Rational cb = tab.basis[i] < f.ncols ? f.c[tab.basis[i]] : Rational(0);
    if (cb != 0)
      for (int j = 0; j <= tab.ncols; ++j) tab.obj[j] -= cb * tab.t[i][j];
  }
  auto st2 = primal_simplex(tab, f.ncols, true, 0.0, max_iter, &iters);
  res.status = st2;
  res.pivots = iters;
  if (st2 != Status::optimal) return res;

  res.ok = true;
  res.x.assign(p.nvars, Rational(0));
  for (int i = 0; i < tab.m; ++i)
    if (tab.basis[i] < p.nvars) res.x[tab.basis[i]] = tab.t[i][tab.ncols];
  res.value = 0;
  for (int j = 0; j < p.nvars; ++j) res.value += f.c[j] * res.x[j];
  return res;
}

}  // namespace detail

// Verifies (and if needed repairs) the double solver's final basis in exact
// arithmetic. Falls back to a full exact solve when the basis cannot be
// reproduced (singular or exactly infeasible).
inline RationalResult rational_verify(const Problem& p, const Solution& sol,
                                      long max_iter = 200000) {
  using detail::Tableau;
  if (sol.status != Status::optimal || sol.rows_removed || sol.basis.empty())
    return detail::solve_exact(p, max_iter);

  auto f = detail::build_standard_form<Rational>(p);
  const int m = f.m;

  Tableau<Rational> tab;
  tab.m = m;
  tab.ncols = f.ncols;
  tab.t.assign(m, std::vector<Rational>(f.ncols + 1, Rational(0)));
  tab.basis.assign(m, -1);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < f.ncols; ++j) tab.t[i][j] = f.a[i][j];
    tab.t[i][f.ncols] = f.b[i];
  }

  // reduce with respect to the double basis; any basis column that turns out
  // singular sends us to the from-scratch exact solve
  std::vector<char> row_done(m, 0);
  for (int idx = 0; idx < m; ++idx) {
    const int col = sol.basis[idx];
    if (col < 0 || col >= f.ncols) return detail::solve_exact(p, max_iter);
    int pr = -1;
    for (int r = 0; r < m; ++r)
      if (!row_done[r] && tab.t[r][col] != 0) { pr = r; break; }
    if (pr < 0) return detail::solve_exact(p, max_iter);
    tab.basis[pr] = col;
    row_done[pr] = 1;
    const Rational piv = tab.t[pr][col];
    for (auto& v : tab.t[pr]) v /= piv;
    for (int r = 0; r < m; ++r) {
      if (r == pr) continue;
      const Rational factor = tab.t[r][col];
      if (factor == 0) continue;
      for (int j = 0; j <= f.ncols; ++j) tab.t[r][j] -= factor * tab.t[pr][j];
    }
  }
  for (int i = 0; i < m; ++i)
    if (tab.t[i][f.ncols] < 0) return detail::solve_exact(p, max_iter);

  tab.obj.assign(f.ncols + 1, Rational(0));
  for (int j = 0; j < f.ncols; ++j) tab.obj[j] = f.c[j];
  for (int i = 0; i < m; ++i) {
    const Rational cb = f.c[tab.basis[i]];
    if (cb != 0)
      for (int j = 0; j <= f.ncols; ++j) tab.obj[j] -= cb * tab.t[i][j];
  }

  RationalResult res;
  res.refined_from_basis = true;
  int iters = 0;
  auto st = detail::primal_simplex(tab, f.ncols, true, 0.0, max_iter, &iters);
  res.status = st;
  res.pivots = iters;
  if (st != Status::optimal) return res;

  res.ok = true;
  res.x.assign(p.nvars, Rational(0));
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < p.nvars) res.x[tab.basis[i]] = tab.t[i][f.ncols];
  res.value = 0;
  for (int j = 0; j < p.nvars; ++j) res.value += f.c[j] * res.x[j];
  return res;
}

inline double to_double(const Rational& r) {
  return r.template convert_to<double>();
}

}  // namespace snowcube::lp
