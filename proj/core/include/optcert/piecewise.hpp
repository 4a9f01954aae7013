#pragma once

#include "optcert/polynomial.hpp"
#include "optcert/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace optcert {

// Closed halfspace {x : a'x + b <= 0}.
struct Halfspace {
  Vec a;
  double b = 0.0;
};

// Polyhedral cell: intersection of its guard halfspaces.
struct Cell {
  std::vector<Halfspace> guards;

  bool contains(const Vec& x, double tol) const {
    for (const auto& g : guards)
      if (g.a.dot(x) + g.b > tol) return false;
    return true;
  }
};

struct Piece {
  Cell cell;
  Polynomial poly;
};

// Axis-aligned domain of interest. Cells only need to cover and match
// across facets inside the box.
struct Box {
  Vec lo;
  Vec hi;

  static Box centered(int n, double half_width);
  bool contains(const Vec& x, double tol) const;
  std::vector<Halfspace> halfspaces() const;
};

// Piecewise polynomial, continuously differentiable across cell boundaries
// (validated separately). Evaluation uses the first cell containing the
// point, so results are deterministic on boundaries.
class PiecewiseFn {
 public:
  PiecewiseFn() = default;
  explicit PiecewiseFn(Polynomial global);
  PiecewiseFn(int n, std::vector<Piece> pieces);

  int dim() const { return n_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool single_piece() const { return pieces_.size() == 1; }
  int max_degree() const;

  // Index of the first cell containing x, or NoCellError.
  int cell_at(const Vec& x, double tol) const;
  // All cells containing x within tol (active cells at a kink).
  std::vector<int> active_cells(const Vec& x, double tol) const;

  double eval(const Vec& x, double tol = 1e-10) const;
  Vec gradient(const Vec& x, double tol = 1e-10) const;
  // Hessian of the piece selected by cell_at; at kink points different
  // active cells may give different matrices.
  Mat piece_hessian(const Vec& x, double tol = 1e-10) const;

 private:
  int n_ = 0;
  std::vector<Piece> pieces_;
};

// Multipliers supplied with a problem file (candidates to verify, not trust).
struct UserMultipliers {
  Vec alpha;   // objective weights; empty for scalar problems
  Vec lambda;  // inequality multipliers
  Vec mu;      // equality multipliers
};

// minimize f_0(x) (or the vector of objectives)
// s.t. g_i(x) <= 0, h_j(x) == 0, all data piecewise polynomial.
struct Problem {
  int n = 0;
  std::vector<PiecewiseFn> objectives;
  std::vector<PiecewiseFn> inequalities;
  std::vector<PiecewiseFn> equalities;
  Box box;
  // User assertion that the constraint system is metrically subregular at
  // the candidate; unlocks necessity claims that sampling cannot supply.
  bool mscq_asserted = false;
  std::optional<UserMultipliers> multipliers;

  bool scalar() const { return objectives.size() == 1; }
};

struct ValidationIssue {
  std::string code;  // EMPTY_CELL, OVERLAP, COVERAGE, C0_MISMATCH, C1_MISMATCH
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
};

// Structural checks on every piecewise function in the problem:
//  - each cell has nonempty interior inside the box,
//  - cells of one function do not overlap in their interiors,
//  - the cells cover the box (sampled),
//  - values and gradients of adjacent pieces agree on shared facets
//    (sampled on each facet).
ValidationReport validate(const Problem& prob, const Tolerances& tol,
                          unsigned seed = 20240915);

// Chebyshev ball of the polyhedron {x : hs_i holds} intersected with the box.
struct InnerBall {
  Vec center;
  double radius = -kInf;  // <= 0 means empty interior
};
InnerBall chebyshev_ball(const std::vector<Halfspace>& hs, const Box& box);

}  // namespace optcert
