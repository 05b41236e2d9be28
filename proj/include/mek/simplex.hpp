#pragma once

#include <vector>

#include "mek/core.hpp"

namespace mek {

enum class Relation { LessEq, Eq, GreaterEq };

struct LpConstraint {
  Vec coeffs;
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

struct LpSolution {
  Vec x;
  double optimum = 0.0;
  int pivots = 0;
};

// Maximizes objective . x subject to the constraints and x >= 0, with a
// dense two-phase primal simplex. Pivoting is Dantzig's rule with a
// permanent switch to Bland's rule after a stretch of degenerate pivots,
// which keeps the usual speed while guaranteeing termination.
// Throws Infeasible or Unbounded.
LpSolution lp_simplex_solve(const Vec& objective,
                            const std::vector<LpConstraint>& constraints);

}  // namespace mek
