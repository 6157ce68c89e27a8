#include "expfam/simplex_lp.hpp"

#include <algorithm>

#include "expfam/errors.hpp"

namespace expfam {

namespace {

template <typename S>
struct Tableau {
  int n;      // original variables
  int ncols;  // n + artificials + 1 (rhs); fixed even if rows are dropped
  std::vector<std::vector<S>> t;
  std::vector<int> basis;
  std::vector<S> cost;  // reduced-cost row; cost[ncols-1] = -objective
  S eps;

  int rows() const { return int(t.size()); }
  int rhs() const { return ncols - 1; }

  void pivot(int r, int c) {
    S p = t[r][c];
    for (int j = 0; j < ncols; ++j) t[r][j] /= p;
    for (int i = 0; i < rows(); ++i) {
      if (i == r) continue;
      S f = t[i][c];
      if (f == S(0)) continue;
      for (int j = 0; j < ncols; ++j) t[i][j] -= f * t[r][j];
    }
    S f = cost[c];
    if (f != S(0)) {
      for (int j = 0; j < ncols; ++j) cost[j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // One Bland step; entering restricted to the first `max_col` columns.
  // Returns false at optimality; sets *unbounded when no leaving row exists.
  bool step(int max_col, bool* unbounded) {
    int enter = -1;
    for (int j = 0; j < max_col; ++j) {
      if (cost[j] < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return false;
    int leave = -1;
    S best_ratio(0);
    for (int i = 0; i < rows(); ++i) {
      if (t[i][enter] > eps) {
        S ratio = t[i][rhs()] / t[i][enter];
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  std::vector<S> extract(int nvars) const {
    std::vector<S> x(nvars, S(0));
    for (int i = 0; i < rows(); ++i) {
      if (basis[i] < nvars) x[basis[i]] = t[i][ncols - 1];
    }
    return x;
  }
};

template <typename S>
std::optional<Tableau<S>> phase_one(const std::vector<std::vector<S>>& A, const std::vector<S>& b,
                                    const S& eps) {
  int m = int(A.size());
  int n = m > 0 ? int(A[0].size()) : 0;
  Tableau<S> tab;
  tab.n = n;
  tab.ncols = n + m + 1;
  tab.eps = eps;
  tab.t.assign(m, std::vector<S>(tab.ncols, S(0)));
  tab.basis.resize(m);
  for (int i = 0; i < m; ++i) {
    bool neg = b[i] < S(0);
    for (int j = 0; j < n; ++j) tab.t[i][j] = neg ? -A[i][j] : A[i][j];
    tab.t[i][n + i] = S(1);
    tab.t[i][tab.rhs()] = neg ? -b[i] : b[i];
    tab.basis[i] = n + i;
  }
  tab.cost.assign(tab.ncols, S(0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab.cost[j] -= tab.t[i][j];
    tab.cost[tab.rhs()] -= tab.t[i][tab.rhs()];
  }
  bool unbounded = false;
  while (tab.step(n + m, &unbounded)) {
  }
  S objective = -tab.cost[tab.rhs()];
  if (objective > eps) return std::nullopt;

  // drive leftover artificials out of the basis; drop redundant rows
  for (int i = tab.rows() - 1; i >= 0; --i) {
    if (tab.basis[i] < n) continue;
    int c = -1;
    for (int j = 0; j < n; ++j) {
      S a = tab.t[i][j] < S(0) ? -tab.t[i][j] : tab.t[i][j];
      if (a > eps) {
        c = j;
        break;
      }
    }
    if (c >= 0) {
      tab.pivot(i, c);
    } else {
      tab.t.erase(tab.t.begin() + i);
      tab.basis.erase(tab.basis.begin() + i);
    }
  }
  return tab;
}

}  // namespace

template <typename S>
LpResult<S> lp_minimize(const std::vector<std::vector<S>>& A, const std::vector<S>& b,
                        const std::vector<S>& c, const S& eps) {
  int m = int(A.size());
  int n = m > 0 ? int(A[0].size()) : int(c.size());
  if (int(b.size()) != m || int(c.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "lp_minimize: inconsistent shapes");
  }
  auto tab_opt = phase_one(A, b, eps);
  if (!tab_opt) return {LpStatus::Infeasible, {}, S(0)};
  Tableau<S>& tab = *tab_opt;

  tab.cost.assign(tab.ncols, S(0));
  for (int j = 0; j < n; ++j) tab.cost[j] = c[j];
  for (int i = 0; i < tab.rows(); ++i) {
    S cb = c[tab.basis[i]];  // all basic columns are original after phase one
    if (cb == S(0)) continue;
    for (int j = 0; j < tab.ncols; ++j) tab.cost[j] -= cb * tab.t[i][j];
  }
  bool unbounded = false;
  while (tab.step(n, &unbounded)) {  // artificials may not re-enter
  }
  if (unbounded) return {LpStatus::Unbounded, {}, S(0)};
  std::vector<S> x = tab.extract(n);
  S obj(0);
  for (int j = 0; j < n; ++j) obj += c[j] * x[j];
  return {LpStatus::Optimal, std::move(x), obj};
}

template <typename S>
std::optional<std::vector<S>> lp_feasible_point(const std::vector<std::vector<S>>& A,
                                                const std::vector<S>& b, const S& eps) {
  auto tab_opt = phase_one(A, b, eps);
  if (!tab_opt) return std::nullopt;
  return tab_opt->extract(tab_opt->n);
}

template LpResult<Rat> lp_minimize<Rat>(const std::vector<std::vector<Rat>>&,
                                        const std::vector<Rat>&, const std::vector<Rat>&,
                                        const Rat&);
template LpResult<double> lp_minimize<double>(const std::vector<std::vector<double>>&,
                                              const std::vector<double>&,
                                              const std::vector<double>&, const double&);
template std::optional<std::vector<Rat>> lp_feasible_point<Rat>(
    const std::vector<std::vector<Rat>>&, const std::vector<Rat>&, const Rat&);
template std::optional<std::vector<double>> lp_feasible_point<double>(
    const std::vector<std::vector<double>>&, const std::vector<double>&, const double&);

}  // namespace expfam
