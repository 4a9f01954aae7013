#pragma once

#include "optcert/multipliers.hpp"
#include "optcert/piecewise.hpp"

#include <vector>

namespace optcert {

// Hessians of the pieces active at a point: the computable realization of
// the second-order behavior of a piecewise function. Linear functionals of
// the form v -> <H v, v> attain their extrema over this finite set.
struct HessianBundle {
  std::vector<Mat> matrices;
  std::vector<int> source_cells;  // piece index per matrix

  std::vector<Vec> apply(const Vec& v) const;
  double qmax(const Vec& v) const;  // max over matrices of v'Hv
  double qmin(const Vec& v) const;
  double min_eigenvalue() const;    // min over matrices of their smallest eigenvalue
};

// Bundle at x: piece Hessians over all cells active at x, ordered by cell
// index and deduplicated (Frobenius distance 1e-12).
HessianBundle bundle(const PiecewiseFn& f, const Vec& x,
                     double tol_cell = 1e-10);

// Weighted sum of all problem functions over the common cell refinement.
// Every constituent's cell structure enters the refinement even at weight
// zero, so kinks of inactive functions stay visible to the bundle.
// Throws RefinementError if the refinement exceeds 10000 cells.
PiecewiseFn lagrangian(const Problem& prob, const MultiplierVector& mult);

// Mean-value bound: delta = f(b) - f(a) - <grad f(a), b - a> must lie in
// [min, max] of (1/2)<H d, d> over the segment's Hessian bundle. The
// segment bundle collects exact guard-crossing parameters, endpoints, and
// 16 interior samples per smooth sub-segment; it is exhaustive for
// piecewise-quadratic functions.
struct TaylorCheck {
  double delta = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};
TaylorCheck taylor_check(const PiecewiseFn& f, const Vec& a, const Vec& b,
                         double tol = 1e-8);

// Exact minimum of the quadratic form v'Hv (h is 2x2 symmetric) over the
// unit arc {(cos t, sin t) : t in [t0, t1]}.
double arc_min_single(const Mat& h, double t0, double t1);

// Exact minimum over the arc of the upper envelope max_i v'H_i v.
// Candidates: arc ends, per-form stationary angles, pairwise crossings.
double arc_min_envelope(const std::vector<Mat>& hs, double t0, double t1);

// Argmin versions: also return the minimizing angle.
struct ArcMin {
  double value = 0.0;
  double angle = 0.0;
};
ArcMin arc_argmin_single(const Mat& h, double t0, double t1);
ArcMin arc_argmin_envelope(const std::vector<Mat>& hs, double t0, double t1);

}  // namespace optcert
