#pragma once

#include "optcert/piecewise.hpp"

#include <limits>
#include <vector>

namespace optcert {

// Empirical order-2 growth around a candidate: the infimum over feasible
// sampled x of 2*gap(x)/|x - xbar|^2, where gap is the objective increase
// (max over objectives for multiobjective problems).
struct GrowthEstimate {
  double radius = 0.0;
  long samples = 0;
  long feasible_count = 0;
  double rho_emp = std::numeric_limits<double>::infinity();
  Vec argmin;  // empty when no nonzero feasible displacement was seen
};

// Uniform ball samples; with equality constraints each sample first takes
// 10 Gauss-Newton projection steps onto {h = 0}. A sample passes the filter
// when g_i <= tol_feas*radius, |h_j| <= tol_feas*radius, and it lies in the
// box. Throws TooFewFeasibleError below 100 feasible samples; throws
// InfeasibleError when xbar itself is infeasible.
GrowthEstimate empirical_growth(const Problem& prob, const Vec& xbar,
                                double radius, long count, unsigned seed,
                                double tol_feas = 1e-8);

struct LocalMinCheck {
  bool holds = false;  // gap >= -1e-10 on every feasible sample
  double worst_gap = 0.0;
  Vec worst;
  long feasible_count = 0;
};

LocalMinCheck empirical_local_min(const Problem& prob, const Vec& xbar,
                                  double radius, long count, unsigned seed,
                                  double tol_feas = 1e-8);

// Numerical surrogate of the contingent cone: unit secants of feasible
// samples at radii 1e-2..1e-5, clustered with 1e-3 angular tolerance.
// Throws TooFewFeasibleError when fewer than 100 usable secants exist.
std::vector<Vec> contingent_probe(const Problem& prob, const Vec& xbar,
                                  long count, unsigned seed,
                                  double tol_feas = 1e-8);

}  // namespace optcert
