#include "cpvf/lp.hpp"

#include <cmath>
#include <limits>

namespace cpvf {

namespace {

constexpr double kEps = 1e-11;

struct Tableau {
  int m, n;
  std::vector<std::vector<double>> D;
  std::vector<int> basic, nonbasic;

  Tableau(const LinearProgram& lp) : m(static_cast<int>(lp.b.size())), n(static_cast<int>(lp.c.size())) {
    D.assign(m + 2, std::vector<double>(n + 2, 0.0));
    basic.resize(m);
    nonbasic.resize(n + 1);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) D[i][j] = lp.A[i][j];
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      D[i][n] = -1;
      D[i][n + 1] = lp.b[i];
    }
    for (int j = 0; j < n; ++j) {
      nonbasic[j] = j;
      D[m][j] = -lp.c[j];
    }
    nonbasic[n] = -1;
    D[m + 1][n] = 1;
  }

  void pivot(int r, int s) {
    double inv = 1.0 / D[r][s];
    for (int i = 0; i < m + 2; ++i)
      if (i != r)
        for (int j = 0; j < n + 2; ++j)
          if (j != s) D[i][j] -= D[r][j] * D[i][s] * inv;
    for (int j = 0; j < n + 2; ++j)
      if (j != s) D[r][j] *= inv;
    for (int i = 0; i < m + 2; ++i)
      if (i != r) D[i][s] *= -inv;
    D[r][s] = inv;
    std::swap(basic[r], nonbasic[s]);
  }

  bool run(int phase) {
    int x = phase == 1 ? m + 1 : m;
    while (true) {
      int s = -1;
      for (int j = 0; j <= n; ++j) {
        if (phase == 2 && nonbasic[j] == -1) continue;
        if (s == -1 || D[x][j] < D[x][s] || (D[x][j] == D[x][s] && nonbasic[j] < nonbasic[s])) s = j;
      }
      if (D[x][s] > -kEps) return true;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (D[i][s] < kEps) continue;
        if (r == -1 || D[i][n + 1] / D[i][s] < D[r][n + 1] / D[r][s] ||
            ((D[i][n + 1] / D[i][s]) == (D[r][n + 1] / D[r][s]) && basic[i] < basic[r]))
          r = i;
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  Tableau t(lp);
  LpSolution sol;
  int r = 0;
  for (int i = 1; i < t.m; ++i)
    if (t.D[i][t.n + 1] < t.D[r][t.n + 1]) r = i;
  if (t.m > 0 && t.D[r][t.n + 1] < -kEps) {
    t.pivot(r, t.n);
    if (!t.run(1) || t.D[t.m + 1][t.n + 1] < -kEps) {
      sol.status = LpSolution::Status::Infeasible;
      return sol;
    }
    for (int i = 0; i < t.m; ++i)
      if (t.basic[i] == -1) {
        int s = -1;
        for (int j = 0; j <= t.n; ++j)
          if (s == -1 || t.D[i][j] < t.D[i][s] || (t.D[i][j] == t.D[i][s] && t.nonbasic[j] < t.nonbasic[s])) s = j;
        t.pivot(i, s);
      }
  }
  if (!t.run(2)) {
    sol.status = LpSolution::Status::Unbounded;
    return sol;
  }
  sol.status = LpSolution::Status::Optimal;
  sol.x.assign(t.n, 0.0);
  for (int i = 0; i < t.m; ++i)
    if (t.basic[i] < t.n && t.basic[i] >= 0) sol.x[t.basic[i]] = t.D[i][t.n + 1];
  sol.value = t.D[t.m][t.n + 1];
  return sol;
}

}  // namespace cpvf
