#include "mek/simplex.hpp"

#include <algorithm>

namespace mek {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;
constexpr int kBlandSwitch = 64;   // degenerate pivots before Bland mode
constexpr long kPivotCap = 500000;

struct Tableau {
  Mat t;                  // m x (ncols + 1), last column is the rhs
  std::vector<int> basis; // basic variable per row
  int n_cols = 0;

  double& rhs(int i) { return t(i, n_cols); }
};

// Recomputes the objective row (z_j = c_B^T T_j - c_j) from scratch.
void build_obj_row(const Tableau& tab, const Vec& cost, Vec& z, double& z_rhs) {
  z = -cost;
  z_rhs = 0.0;
  for (int i = 0; i < tab.t.rows(); ++i) {
    const double cb = cost(tab.basis[i]);
    if (cb == 0.0) continue;
    z += cb * tab.t.row(i).head(tab.n_cols).transpose();
    z_rhs += cb * tab.t(i, tab.n_cols);
  }
}

void pivot(Tableau& tab, Vec& z, double& z_rhs, int row, int col) {
  const double piv = tab.t(row, col);
  tab.t.row(row) /= piv;
  for (int i = 0; i < tab.t.rows(); ++i) {
    if (i == row) continue;
    const double f = tab.t(i, col);
    if (f != 0.0) tab.t.row(i) -= f * tab.t.row(row);
  }
  const double fz = z(col);
  if (fz != 0.0) {
    z -= fz * tab.t.row(row).head(tab.n_cols).transpose();
    z_rhs -= fz * tab.t(row, tab.n_cols);
  }
  tab.basis[row] = col;
}

// Runs simplex iterations on the given column set until optimality.
// Returns false if the problem is unbounded in some entering direction.
bool iterate(Tableau& tab, Vec& z, double& z_rhs,
             const std::vector<bool>& allowed, int* pivots) {
  const int m = static_cast<int>(tab.t.rows());
  bool bland = false;
  int stalled = 0;
  for (long k = 0; k < kPivotCap; ++k) {
    int enter = -1;
    if (bland) {
      for (int j = 0; j < tab.n_cols; ++j) {
        if (allowed[j] && z(j) < -kCostTol) {
          enter = j;
          break;
        }
      }
    } else {
      double best = -kCostTol;
      for (int j = 0; j < tab.n_cols; ++j) {
        if (allowed[j] && z(j) < best) {
          best = z(j);
          enter = j;
        }
      }
    }
    if (enter < 0) return true;

    int leave = -1;
    double best_ratio = kInf;
    for (int i = 0; i < m; ++i) {
      const double a = tab.t(i, enter);
      if (a > kPivotTol) {
        const double ratio = tab.t(i, tab.n_cols) / a;
        if (ratio < best_ratio - 1e-15 ||
            (ratio < best_ratio + 1e-15 &&
             (leave < 0 || tab.basis[i] < tab.basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;

    const double before = z_rhs;
    pivot(tab, z, z_rhs, leave, enter);
    ++*pivots;
    if (!bland) {
      stalled = (z_rhs > before + 1e-13) ? 0 : stalled + 1;
      if (stalled >= kBlandSwitch) bland = true;
    }
  }
  throw Error("lp_simplex_solve: pivot cap exceeded");
}

}  // namespace

LpSolution lp_simplex_solve(const Vec& objective,
                            const std::vector<LpConstraint>& constraints) {
  const int n = static_cast<int>(objective.size());
  const int m = static_cast<int>(constraints.size());
  if (m == 0) throw DomainError("lp_simplex_solve: no constraints");
  for (const auto& c : constraints) {
    if (c.coeffs.size() != n) {
      throw DimensionMismatch("lp_simplex_solve: constraint width " +
                              std::to_string(c.coeffs.size()) + " vs " +
                              std::to_string(n) + " variables");
    }
  }

  // Column layout: original vars, one slack/surplus per inequality, then
  // artificials for >= and = rows.
  int n_slack = 0, n_art = 0;
  for (const auto& c : constraints) {
    Relation rel = c.relation;
    if (c.rhs < 0.0) {
      rel = (rel == Relation::LessEq)
                ? Relation::GreaterEq
                : (rel == Relation::GreaterEq ? Relation::LessEq : Relation::Eq);
    }
    if (rel != Relation::Eq) ++n_slack;
    if (rel != Relation::LessEq) ++n_art;
  }

  Tableau tab;
  tab.n_cols = n + n_slack + n_art;
  tab.t = Mat::Zero(m, tab.n_cols + 1);
  tab.basis.assign(m, -1);
  int slack_at = n, art_at = n + n_slack;
  for (int i = 0; i < m; ++i) {
    Vec row = constraints[i].coeffs;
    double rhs = constraints[i].rhs;
    Relation rel = constraints[i].relation;
    if (rhs < 0.0) {
      row = -row;
      rhs = -rhs;
      rel = (rel == Relation::LessEq)
                ? Relation::GreaterEq
                : (rel == Relation::GreaterEq ? Relation::LessEq : Relation::Eq);
    }
    tab.t.row(i).head(n) = row.transpose();
    tab.t(i, tab.n_cols) = rhs;
    if (rel == Relation::LessEq) {
      tab.t(i, slack_at) = 1.0;
      tab.basis[i] = slack_at++;
    } else if (rel == Relation::GreaterEq) {
      tab.t(i, slack_at++) = -1.0;
      tab.t(i, art_at) = 1.0;
      tab.basis[i] = art_at++;
    } else {
      tab.t(i, art_at) = 1.0;
      tab.basis[i] = art_at++;
    }
  }

  LpSolution sol;
  std::vector<bool> allowed(tab.n_cols, true);
  Vec z;
  double z_rhs = 0.0;

  // Phase 1: maximize minus the sum of artificials.
  if (n_art > 0) {
    Vec phase1 = Vec::Zero(tab.n_cols);
    phase1.segment(n + n_slack, n_art).setConstant(-1.0);
    build_obj_row(tab, phase1, z, z_rhs);
    if (!iterate(tab, z, z_rhs, allowed, &sol.pivots)) {
      throw Error("lp_simplex_solve: phase 1 unbounded");
    }
    if (z_rhs < -1e-8) throw Infeasible("lp_simplex_solve: no feasible point");
    // Pivot leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < n + n_slack) continue;
      int col = -1;
      for (int j = 0; j < n + n_slack; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(tab, z, z_rhs, i, col);
        ++sol.pivots;
      }
    }
  }
  for (int j = n + n_slack; j < tab.n_cols; ++j) allowed[j] = false;

  // Phase 2: the caller's objective over original plus slack columns.
  Vec cost = Vec::Zero(tab.n_cols);
  cost.head(n) = objective;
  build_obj_row(tab, cost, z, z_rhs);
  if (!iterate(tab, z, z_rhs, allowed, &sol.pivots)) {
    throw Unbounded("lp_simplex_solve: objective unbounded");
  }

  sol.x = Vec::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) sol.x(tab.basis[i]) = tab.t(i, tab.n_cols);
  }
  sol.optimum = z_rhs;
  return sol;
}

}  // namespace mek
