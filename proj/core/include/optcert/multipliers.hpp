#pragma once

#include "optcert/piecewise.hpp"

#include <optional>
#include <string>
#include <vector>

namespace optcert {

// Indices of inequality constraints active at the candidate point.
struct ActiveSet {
  std::vector<int> indices;

  bool contains(int i) const {
    for (int k : indices)
      if (k == i) return true;
    return false;
  }
};

// Violation messages for an infeasible point; empty means feasible.
std::vector<std::string> feasibility_violations(const Problem& prob,
                                                const Vec& x, double tol_feas);

// Throws InfeasibleError when x is not feasible to tol.feas.
ActiveSet active_set(const Problem& prob, const Vec& x, const Tolerances& tol);

// (alpha, lambda, mu): objective weights, inequality and equality
// multipliers. alpha is [1] for scalar problems; lambda is complementary
// (zero off the active set).
struct MultiplierVector {
  Vec alpha;
  Vec lambda;
  Vec mu;
};

struct KKTResidual {
  Vec stationarity;      // gradient of the Lagrangian at x
  Vec complementarity;   // lambda_i * g_i(x)
  double stationarity_norm = 0.0;
  double complementarity_norm = 0.0;
};

KKTResidual kkt_residual(const Problem& prob, const Vec& x,
                         const MultiplierVector& mult);

// Result of the multiplier feasibility LP. When no multipliers exist, the
// Farkas certificate y satisfies y'grad_g_i <= 0 on actives, y'grad_h_j == 0,
// and y'grad_f < 0 — a linearized descent direction.
struct MultiplierSearch {
  std::optional<MultiplierVector> mult;
  Vec farkas;
};

MultiplierSearch find_multipliers(const Problem& prob, const Vec& x,
                                  const ActiveSet& act);

// Multiobjective variant: weights alpha >= 0 normalized to sum 1. Works for
// q = 1 as well, where it reduces to find_multipliers.
MultiplierSearch find_mop_multipliers(const Problem& prob, const Vec& x,
                                      const ActiveSet& act);

struct LicqResult {
  bool holds = false;
  double min_singular_value = 0.0;  // of the active-gradient matrix
};
LicqResult check_licq(const Problem& prob, const Vec& x, const ActiveSet& act);

struct MfcqResult {
  bool holds = false;
  bool equalities_independent = false;
  double margin = 0.0;  // best s with grad_g_i . d <= -s on actives
  Vec direction;
};
MfcqResult check_mfcq(const Problem& prob, const Vec& x, const ActiveSet& act);

// Vertices of the multiplier polyhedron, enumerated via supports of the
// sign-constrained coordinates. Runs only at small scale.
struct VertexEnumeration {
  bool ran = false;
  std::string note;  // reason when skipped
  int count = 0;
  bool bounded = false;  // recession cone trivial
  std::vector<MultiplierVector> vertices;
};

// Scalar problems: polyhedron {(lambda_A, mu) : stationarity, lambda >= 0}.
// Multiobjective: alpha joins the sign-constrained block with sum(alpha)=1.
VertexEnumeration enumerate_multiplier_vertices(const Problem& prob,
                                                const Vec& x,
                                                const ActiveSet& act);

}  // namespace optcert
