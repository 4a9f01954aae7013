#include "optcert/piecewise.hpp"

#include "optcert/linprog.hpp"
#include "optcert/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>

namespace optcert {

namespace {

std::string vec_str(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

// Orthonormal basis of the orthogonal complement of a (n x (n-1)).
Mat null_basis(const Vec& a) {
  const int n = static_cast<int>(a.size());
  Mat col = a;
  col.resize(n, 1);
  Eigen::HouseholderQR<Mat> qr(col);
  Mat q = qr.householderQ();
  return q.rightCols(n - 1);
}

}  // namespace

Box Box::centered(int n, double half_width) {
  Box b;
  b.lo = Vec::Constant(n, -half_width);
  b.hi = Vec::Constant(n, half_width);
  return b;
}

bool Box::contains(const Vec& x, double tol) const {
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  return true;
}

std::vector<Halfspace> Box::halfspaces() const {
  const int n = static_cast<int>(lo.size());
  std::vector<Halfspace> hs;
  hs.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    hs.push_back({e, -hi[i]});  // x_i <= hi
    hs.push_back({-e, lo[i]});  // x_i >= lo
  }
  return hs;
}

PiecewiseFn::PiecewiseFn(Polynomial global) : n_(global.dim()) {
  pieces_.push_back(Piece{Cell{}, std::move(global)});
}

PiecewiseFn::PiecewiseFn(int n, std::vector<Piece> pieces)
    : n_(n), pieces_(std::move(pieces)) {
  if (n_ <= 0) throw Error("piecewise function dimension must be positive");
  if (pieces_.empty())
    throw Error("piecewise function needs at least one piece");
  for (const auto& p : pieces_) {
    if (p.poly.dim() != n_)
      throw DimensionError("piece polynomial dimension mismatch");
    for (const auto& g : p.cell.guards) {
      if (g.a.size() != n_)
        throw DimensionError("guard normal dimension mismatch");
      if (g.a.lpNorm<Eigen::Infinity>() == 0.0)
        throw Error("guard has zero normal vector");
    }
  }
}

int PiecewiseFn::max_degree() const {
  int d = 0;
  for (const auto& p : pieces_) d = std::max(d, p.poly.degree());
  return d;
}

int PiecewiseFn::cell_at(const Vec& x, double tol) const {
  for (int k = 0; k < static_cast<int>(pieces_.size()); ++k)
    if (pieces_[k].cell.contains(x, tol)) return k;
  throw NoCellError("point " + vec_str(x) +
                    " lies outside every cell of a piecewise function");
}

std::vector<int> PiecewiseFn::active_cells(const Vec& x, double tol) const {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(pieces_.size()); ++k)
    if (pieces_[k].cell.contains(x, tol)) out.push_back(k);
  if (out.empty())
    throw NoCellError("point " + vec_str(x) +
                      " lies outside every cell of a piecewise function");
  return out;
}

double PiecewiseFn::eval(const Vec& x, double tol) const {
  return pieces_[cell_at(x, tol)].poly.eval(x);
}

Vec PiecewiseFn::gradient(const Vec& x, double tol) const {
  return pieces_[cell_at(x, tol)].poly.gradient(x);
}

Mat PiecewiseFn::piece_hessian(const Vec& x, double tol) const {
  return pieces_[cell_at(x, tol)].poly.hessian(x);
}

InnerBall chebyshev_ball(const std::vector<Halfspace>& hs, const Box& box) {
  const int n = static_cast<int>(box.lo.size());
  std::vector<Halfspace> rows = hs;
  const auto brows = box.halfspaces();
  rows.insert(rows.end(), brows.begin(), brows.end());

  LpProblem p = LpProblem::make(n + 1);
  p.c[n] = -1.0;  // maximize the ball radius
  p.ub[n] = 1e6;
  for (int j = 0; j < n; ++j) {
    p.lb[j] = box.lo[j] - 1.0;
    p.ub[j] = box.hi[j] + 1.0;
  }
  std::vector<int> used;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    if (rows[i].a.norm() == 0.0) {
      if (rows[i].b > 0.0) return {Vec::Zero(n), -kInf};
      continue;
    }
    used.push_back(i);
  }
  p.a_ub.resize(static_cast<int>(used.size()), n + 1);
  p.b_ub.resize(static_cast<int>(used.size()));
  for (int r = 0; r < static_cast<int>(used.size()); ++r) {
    const auto& row = rows[used[r]];
    p.a_ub.row(r).head(n) = row.a.transpose();
    p.a_ub(r, n) = row.a.norm();
    p.b_ub[r] = -row.b;
  }
  const LpResult res = solve_lp(p);
  if (res.status != LpStatus::kOptimal) return {Vec::Zero(n), -kInf};
  return {res.x.head(n), res.x[n]};
}

namespace {

// Largest inscribed ball of a cell facet, measured inside the guard
// hyperplane. Radius <= 0 means the facet has empty relative interior.
InnerBall facet_ball(const Cell& cell, int guard_idx, const Box& box) {
  const Vec& a = cell.guards[guard_idx].a;
  const double b = cell.guards[guard_idx].b;
  const int n = static_cast<int>(a.size());
  const Vec ahat = a / a.norm();

  std::vector<Halfspace> rows;
  for (int j = 0; j < static_cast<int>(cell.guards.size()); ++j)
    if (j != guard_idx) rows.push_back(cell.guards[j]);
  const auto brows = box.halfspaces();
  rows.insert(rows.end(), brows.begin(), brows.end());

  LpProblem p = LpProblem::make(n + 1);
  p.c[n] = -1.0;
  p.ub[n] = 1e6;
  for (int j = 0; j < n; ++j) {
    p.lb[j] = box.lo[j] - 1.0;
    p.ub[j] = box.hi[j] + 1.0;
  }
  p.a_ub.resize(static_cast<int>(rows.size()), n + 1);
  p.b_ub.resize(static_cast<int>(rows.size()));
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    const Vec proj = rows[r].a - rows[r].a.dot(ahat) * ahat;
    p.a_ub.row(r).head(n) = rows[r].a.transpose();
    p.a_ub(r, n) = proj.norm();
    p.b_ub[r] = -rows[r].b;
  }
  p.a_eq.resize(1, n + 1);
  p.a_eq.row(0).head(n) = a.transpose();
  p.a_eq(0, n) = 0.0;
  p.b_eq.resize(1);
  p.b_eq[0] = -b;

  const LpResult res = solve_lp(p);
  if (res.status != LpStatus::kOptimal) return {Vec::Zero(n), -kInf};
  Vec c = res.x.head(n);
  c += ((-b - a.dot(c)) / a.squaredNorm()) * a;  // snap onto the hyperplane
  return {c, res.x[n]};
}

}  // namespace

ValidationReport validate(const Problem& prob, const Tolerances& tol,
                          unsigned seed) {
  ValidationReport rep;
  std::map<std::string, int> per_code;
  auto add = [&](const std::string& label, const std::string& code,
                 const std::string& msg) {
    rep.ok = false;
    if (per_code[label + "/" + code]++ < 2 &&
        rep.issues.size() < 64)
      rep.issues.push_back({code, label + ": " + msg});
  };

  for (int i = 0; i < prob.n; ++i) {
    if (!(prob.box.lo[i] < prob.box.hi[i])) {
      add("box", "BOX", "lower bound must be below upper bound");
      return rep;
    }
  }

  std::vector<std::pair<std::string, const PiecewiseFn*>> fns;
  for (int k = 0; k < static_cast<int>(prob.objectives.size()); ++k)
    fns.push_back({"objective " + std::to_string(k), &prob.objectives[k]});
  for (int k = 0; k < static_cast<int>(prob.inequalities.size()); ++k)
    fns.push_back({"inequality " + std::to_string(k), &prob.inequalities[k]});
  for (int k = 0; k < static_cast<int>(prob.equalities.size()); ++k)
    fns.push_back({"equality " + std::to_string(k), &prob.equalities[k]});

  Rng rng(seed);
  const int n = prob.n;

  for (const auto& [label, fn] : fns) {
    if (fn->dim() != n) {
      add(label, "DIMENSION", "function dimension differs from problem");
      continue;
    }
    const auto& pieces = fn->pieces();
    const int np = static_cast<int>(pieces.size());

    for (int k = 0; k < np; ++k) {
      const InnerBall ball = chebyshev_ball(pieces[k].cell.guards, prob.box);
      if (ball.radius <= 1e-7)
        add(label, "EMPTY_CELL",
            "cell " + std::to_string(k) + " has empty interior in the box");
    }

    for (int k = 0; k < np; ++k) {
      for (int l = k + 1; l < np; ++l) {
        std::vector<Halfspace> combined = pieces[k].cell.guards;
        combined.insert(combined.end(), pieces[l].cell.guards.begin(),
                        pieces[l].cell.guards.end());
        const InnerBall ball = chebyshev_ball(combined, prob.box);
        if (ball.radius > 1e-7)
          add(label, "OVERLAP",
              "cells " + std::to_string(k) + " and " + std::to_string(l) +
                  " share interior near " + vec_str(ball.center));
      }
    }

    if (np == 1 && pieces[0].cell.guards.empty()) continue;

    // Coverage: random points in the box must land in some cell.
    const int ncov = 200 * n + 200;
    for (int s = 0; s < ncov; ++s) {
      Vec x(n);
      for (int i = 0; i < n; ++i)
        x[i] = rng.uniform(prob.box.lo[i], prob.box.hi[i]);
      bool covered = false;
      for (int k = 0; k < np && !covered; ++k)
        covered = pieces[k].cell.contains(x, 1e-9);
      if (!covered)
        add(label, "COVERAGE", "no cell contains box point " + vec_str(x));
    }

    // Facet agreement: sample each cell facet and compare all active pieces.
    for (int k = 0; k < np; ++k) {
      const Cell& cell = pieces[k].cell;
      for (int gi = 0; gi < static_cast<int>(cell.guards.size()); ++gi) {
        const InnerBall fb = facet_ball(cell, gi, prob.box);
        if (fb.radius <= 1e-7) continue;
        const Vec& a = cell.guards[gi].a;
        const Vec ahat = a / a.norm();
        const double b = cell.guards[gi].b;

        // Probe both sides of the facet for coverage gaps.
        for (double side : {1.0, -1.0}) {
          const Vec xp = fb.center + 1e-5 * side * ahat;
          if (!prob.box.contains(xp, 0.0)) continue;
          bool covered = false;
          for (int kk = 0; kk < np && !covered; ++kk)
            covered = pieces[kk].cell.contains(xp, 1e-9);
          if (!covered)
            add(label, "COVERAGE",
                "no cell contains point " + vec_str(xp) + " beside a facet");
        }

        std::vector<Vec> samples = {fb.center};
        if (n > 1) {
          const Mat nb = null_basis(a);
          std::vector<Halfspace> walls;
          for (int j = 0; j < static_cast<int>(cell.guards.size()); ++j)
            if (j != gi) walls.push_back(cell.guards[j]);
          const auto brows = prob.box.halfspaces();
          walls.insert(walls.end(), brows.begin(), brows.end());
          for (int s = 0; s < 24; ++s) {
            Vec w(n - 1);
            for (int i = 0; i < n - 1; ++i) w[i] = rng.normal();
            Vec d = nb * w;
            const double dn = d.norm();
            if (dn < 1e-12) continue;
            d /= dn;
            double tpos = 1e3, tneg = 1e3;
            for (const auto& wall : walls) {
              const double ad = wall.a.dot(d);
              const double slack = -(wall.a.dot(fb.center) + wall.b);
              if (ad > 1e-12) tpos = std::min(tpos, slack / ad);
              if (ad < -1e-12) tneg = std::min(tneg, -slack / ad);
            }
            tpos = std::max(tpos, 0.0);
            tneg = std::max(tneg, 0.0);
            const double u = rng.uniform();
            const double t = -0.9 * tneg + u * 0.9 * (tneg + tpos);
            Vec x = fb.center + t * d;
            x += ((-b - a.dot(x)) / a.squaredNorm()) * a;
            samples.push_back(x);
          }
        }

        for (const Vec& x : samples) {
          std::vector<int> act;
          for (int kk = 0; kk < np; ++kk)
            if (pieces[kk].cell.contains(x, 1e-9)) act.push_back(kk);
          if (act.size() < 2) continue;
          const double v0 = pieces[act[0]].poly.eval(x);
          const Vec g0 = pieces[act[0]].poly.gradient(x);
          for (std::size_t idx = 1; idx < act.size(); ++idx) {
            const double v = pieces[act[idx]].poly.eval(x);
            const Vec g = pieces[act[idx]].poly.gradient(x);
            const double vs =
                std::max({1.0, std::fabs(v0), std::fabs(v)});
            if (std::fabs(v - v0) > tol.c0 * vs)
              add(label, "C0_MISMATCH",
                  "cells " + std::to_string(act[0]) + " and " +
                      std::to_string(act[idx]) + " disagree in value at " +
                      vec_str(x));
            const double gs = std::max({1.0, g0.lpNorm<Eigen::Infinity>(),
                                        g.lpNorm<Eigen::Infinity>()});
            if ((g - g0).lpNorm<Eigen::Infinity>() > tol.c1 * gs)
              add(label, "C1_MISMATCH",
                  "cells " + std::to_string(act[0]) + " and " +
                      std::to_string(act[idx]) +
                      " disagree in gradient at " + vec_str(x));
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace optcert
