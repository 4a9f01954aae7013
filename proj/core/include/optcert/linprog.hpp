#pragma once

#include "optcert/types.hpp"

#include <limits>
#include <vector>

namespace optcert {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// minimize c'x  subject to  a_ub x <= b_ub,  a_eq x == b_eq,  lb <= x <= ub.
// Matrices may have zero rows; bounds entries may be +-infinity.
struct LpProblem {
  Vec c;
  Mat a_ub;
  Vec b_ub;
  Mat a_eq;
  Vec b_eq;
  Vec lb;
  Vec ub;

  static LpProblem make(int n);
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Vec x;                   // valid when kOptimal
  double objective = 0.0;  // c'x at the solution
};

// Dense two-phase primal simplex with Bland's anti-cycling rule.
// Deterministic: identical inputs give identical pivot sequences.
LpResult solve_lp(const LpProblem& p);

// Feasibility of  a x == b  with x_j >= 0 for flagged columns (others free).
struct FarkasResult {
  bool feasible = false;
  Vec x;  // a feasible point, when one exists
  // When infeasible: y with y'a_j <= 0 for flagged columns, y'a_j == 0 for
  // free columns, and y'b > 0.
  Vec y;
};

FarkasResult solve_eq_sign(const Mat& a, const Vec& b,
                           const std::vector<bool>& nonneg);

}  // namespace optcert
