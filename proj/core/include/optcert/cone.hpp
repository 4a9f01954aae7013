#pragma once

#include "optcert/multipliers.hpp"
#include "optcert/piecewise.hpp"

#include <vector>

namespace optcert {

enum class Relation { kLeq, kEq };  // a.v <= 0  /  a.v == 0

struct ConeRow {
  Vec a;
  Relation rel = Relation::kLeq;
};

// Polyhedral cone {v : a.v <= 0 or a.v == 0 per row}. Rows are scaled to
// unit infinity norm and deduplicated; zero rows are dropped and counted
// (a dropped row means the represented cone is conservatively larger).
class LinearCone {
 public:
  LinearCone() = default;
  LinearCone(int n, std::vector<ConeRow> rows);

  int dim() const { return n_; }
  const std::vector<ConeRow>& rows() const { return rows_; }
  int dropped_rows() const { return dropped_; }
  bool whole_space() const { return rows_.empty(); }
  bool contains(const Vec& v, double tol) const;

 private:
  int n_ = 0;
  int dropped_ = 0;
  std::vector<ConeRow> rows_;
};

// Linearization of the feasible set at x: active inequality gradients as
// LEQ rows, all equality gradients as EQ rows.
LinearCone linearization_cone(const Problem& prob, const Vec& x,
                              const ActiveSet& act);

// Tightened cone: active inequalities whose multiplier exceeds tol_mult
// become equalities.
LinearCone x0_cone(const Problem& prob, const Vec& x, const ActiveSet& act,
                   const Vec& lambda, double tol_mult);

// Critical cone of a scalar problem: linearization plus the objective
// gradient forced to equality.
LinearCone critical_cone(const Problem& prob, const Vec& x,
                         const ActiveSet& act);

// One component per objective: that gradient EQ, the others LEQ, plus the
// linearization rows. The critical set is the union of the components.
struct CriticalComponent {
  int objective = 0;
  LinearCone cone;
};
struct CriticalUnion {
  std::vector<CriticalComponent> components;
};
CriticalUnion mop_critical_union(const Problem& prob, const Vec& x,
                                 const ActiveSet& act);

// Generator representation: cone(rays) + span(lineality). Rays are unit
// vectors orthogonal to the lineality space, sorted lexicographically;
// lineality is an orthonormal basis.
struct RayBasis {
  std::vector<Vec> rays;
  std::vector<Vec> lineality;

  bool trivial() const { return rays.empty() && lineality.empty(); }
};

// Double description. Exact rational arithmetic when every row entry has a
// small rational representation, floating point otherwise. Dimension is
// capped at 8.
RayBasis extreme_rays(const LinearCone& cone);

// True iff the cone is {0}: checked by maximizing +-v_i over the cone
// intersected with the unit box.
bool is_trivial(const LinearCone& cone);

// Unit directions in the cone: every ray first, then +-each lineality
// vector, then seeded random nonnegative ray combinations plus lineality
// components, until at least `count` directions exist.
// Throws TrivialConeError when the basis is trivial.
std::vector<Vec> sample_directions(const RayBasis& basis, int count,
                                   unsigned seed);

// Orthonormal basis (n x d) of the span of rays and lineality.
Mat span_basis(const RayBasis& basis);

}  // namespace optcert
