#include "optcert/linprog.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace optcert {

namespace {

constexpr double kEpsRc = 1e-9;    // reduced-cost optimality threshold
constexpr double kEpsPiv = 1e-10;  // minimum acceptable pivot magnitude
constexpr double kEpsFeas = 1e-8;  // phase-1 objective cutoff
constexpr long kMaxPivots = 200000;

// Dense tableau simplex over the standard form  a z = b, z >= 0.
// Bland's rule on both the entering and leaving choices makes the pivot
// sequence deterministic and cycle-free.
class Simplex {
 public:
  Simplex(Mat a, Vec b) {
    m_ = static_cast<int>(a.rows());
    nc_ = static_cast<int>(a.cols());
    row_sign_ = Vec::Ones(m_);
    for (int i = 0; i < m_; ++i) {
      if (b[i] < 0.0) {
        a.row(i) *= -1.0;
        b[i] = -b[i];
        row_sign_[i] = -1.0;
      }
    }
    a_norm_ = a;
    b_norm_ = b;
    const int cols = nc_ + m_;  // structural + one artificial per row
    t_.resize(m_, cols + 1);
    t_.leftCols(nc_) = a;
    t_.block(0, nc_, m_, m_) = Mat::Identity(m_, m_);
    t_.col(cols) = b;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = nc_ + i;
    kept_rows_.resize(m_);
    for (int i = 0; i < m_; ++i) kept_rows_[i] = i;
  }

  // Minimizes the artificial sum. Returns the residual infeasibility; when
  // it exceeds the cutoff, phase1_dual() holds a certificate for the
  // original (un-normalized) rows.
  double run_phase1() {
    zrow_ = Vec::Zero(t_.cols());
    zrow_.segment(nc_, m_).setOnes();
    for (int i = 0; i < m_; ++i) zrow_ -= t_.row(i);
    iterate(nc_ + m_, /*phase1=*/true);
    const double resid = -zrow_[t_.cols() - 1];
    phase1_dual_ = Vec::Zero(m_);
    for (int i = 0; i < m_; ++i)
      phase1_dual_[i] = row_sign_[i] * (1.0 - zrow_[nc_ + i]);
    if (resid <= kEpsFeas) drop_artificials();
    return resid;
  }

  // Requires a successful phase 1. cost covers the structural columns.
  LpStatus run_phase2(const Vec& cost) {
    zrow_ = Vec::Zero(t_.cols());
    zrow_.head(nc_) = cost;
    for (int i = 0; i < static_cast<int>(basis_.size()); ++i)
      if (cost[basis_[i]] != 0.0) zrow_ -= cost[basis_[i]] * t_.row(i);
    return iterate(nc_, /*phase1=*/false);
  }

  // Structural solution, re-solved against the pristine constraint data for
  // accuracy (the tableau accumulates elimination error).
  Vec solution() const {
    Vec z = Vec::Zero(nc_);
    const int mk = static_cast<int>(basis_.size());
    if (mk > 0) {
      Mat basis_mat(mk, mk);
      Vec rhs(mk);
      for (int i = 0; i < mk; ++i) {
        rhs[i] = b_norm_[kept_rows_[i]];
        for (int k = 0; k < mk; ++k)
          basis_mat(i, k) = column_entry(kept_rows_[i], basis_[k]);
      }
      Vec zb = basis_mat.colPivHouseholderQr().solve(rhs);
      if ((basis_mat * zb - rhs).cwiseAbs().maxCoeff() < 1e-7) {
        for (int k = 0; k < mk; ++k)
          if (basis_[k] < nc_) z[basis_[k]] = zb[k];
      } else {
        for (int k = 0; k < mk; ++k)
          if (basis_[k] < nc_) z[basis_[k]] = t_(k, t_.cols() - 1);
      }
    }
    return z;
  }

  const Vec& phase1_dual() const { return phase1_dual_; }

 private:
  // Entry of the standard-form matrix (structural columns then artificial
  // identity) at an original normalized row.
  double column_entry(int orig_row, int col) const {
    if (col < nc_) return a_norm_(orig_row, col);
    return orig_row == col - nc_ ? 1.0 : 0.0;
  }

  void pivot(int r, int col) {
    t_.row(r) /= t_(r, col);
    for (int i = 0; i < static_cast<int>(basis_.size()); ++i) {
      if (i == r || t_(i, col) == 0.0) continue;
      t_.row(i) -= t_(i, col) * t_.row(r);
    }
    zrow_ -= zrow_[col] * t_.row(r);
    basis_[r] = col;
  }

  // Bland: entering = lowest eligible column index; leaving = among the
  // minimum-ratio rows, the one whose basic variable has the lowest index.
  LpStatus iterate(int ncols_active, bool phase1) {
    const int rhs = static_cast<int>(t_.cols()) - 1;
    for (long it = 0; it < kMaxPivots; ++it) {
      int enter = -1;
      for (int j = 0; j < ncols_active; ++j) {
        if (zrow_[j] < -kEpsRc) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < static_cast<int>(basis_.size()); ++i) {
        if (t_(i, enter) <= kEpsPiv) continue;
        const double ratio = t_(i, rhs) / t_(i, enter);
        if (leave < 0 || ratio < best - 1e-12 ||
            (std::fabs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) {
        if (phase1)
          throw Error("simplex: phase-1 objective unbounded below");
        return LpStatus::kUnbounded;
      }
      pivot(leave, enter);
    }
    throw Error("simplex: pivot limit exceeded");
  }

  // Pivot basic artificials out; rows that cannot release one are redundant
  // and get removed together with the artificial columns.
  void drop_artificials() {
    std::vector<int> keep;
    for (int r = 0; r < static_cast<int>(basis_.size()); ++r) {
      if (basis_[r] < nc_) {
        keep.push_back(r);
        continue;
      }
      int col = -1;
      double mag = 1e-9;
      for (int j = 0; j < nc_; ++j) {
        if (std::fabs(t_(r, j)) > mag) {
          mag = std::fabs(t_(r, j));
          col = j;
        }
      }
      if (col >= 0) {
        pivot(r, col);
        keep.push_back(r);
      }
    }
    const int mk = static_cast<int>(keep.size());
    Mat t2(mk, nc_ + 1);
    std::vector<int> basis2(mk), kept2(mk);
    for (int i = 0; i < mk; ++i) {
      t2.row(i).head(nc_) = t_.row(keep[i]).head(nc_);
      t2(i, nc_) = t_(keep[i], t_.cols() - 1);
      basis2[i] = basis_[keep[i]];
      kept2[i] = kept_rows_[keep[i]];
    }
    t_ = std::move(t2);
    basis_ = std::move(basis2);
    kept_rows_ = std::move(kept2);
  }

  int m_ = 0;
  int nc_ = 0;
  Mat a_norm_, t_;
  Vec b_norm_, row_sign_, zrow_, phase1_dual_;
  std::vector<int> basis_;
  std::vector<int> kept_rows_;
};

// How an original variable maps into standard-form columns.
struct VarMap {
  int col = -1;        // first column
  double shift = 0.0;  // x = shift + sign * z   (or z+ - z- when split)
  double sign = 1.0;
  bool split = false;
};

}  // namespace

LpProblem LpProblem::make(int n) {
  LpProblem p;
  p.c = Vec::Zero(n);
  p.a_ub.resize(0, n);
  p.b_ub.resize(0);
  p.a_eq.resize(0, n);
  p.b_eq.resize(0);
  p.lb = Vec::Constant(n, -kInf);
  p.ub = Vec::Constant(n, kInf);
  return p;
}

LpResult solve_lp(const LpProblem& p) {
  const int n = static_cast<int>(p.c.size());
  if (p.a_ub.cols() != n || p.a_eq.cols() != n || p.lb.size() != n ||
      p.ub.size() != n)
    throw DimensionError("solve_lp: inconsistent dimensions");

  std::vector<VarMap> vmap(n);
  int nstruct = 0;
  int n_ubrows = 0;
  for (int j = 0; j < n; ++j) {
    const bool lo = std::isfinite(p.lb[j]);
    const bool hi = std::isfinite(p.ub[j]);
    vmap[j].col = nstruct;
    if (lo) {
      vmap[j].shift = p.lb[j];
      vmap[j].sign = 1.0;
      nstruct += 1;
      if (hi) n_ubrows += 1;
    } else if (hi) {
      vmap[j].shift = p.ub[j];
      vmap[j].sign = -1.0;
      nstruct += 1;
    } else {
      vmap[j].split = true;
      nstruct += 2;
    }
  }

  const int m_ub = static_cast<int>(p.a_ub.rows());
  const int m_eq = static_cast<int>(p.a_eq.rows());
  const int mrows = m_ub + n_ubrows + m_eq;
  const int nslack = m_ub + n_ubrows;
  Mat a = Mat::Zero(mrows, nstruct + nslack);
  Vec b = Vec::Zero(mrows);

  auto fill_row = [&](int row, const Eigen::RowVectorXd& coeffs, double rhs) {
    b[row] = rhs;
    for (int j = 0; j < n; ++j) {
      const double cij = coeffs[j];
      if (cij == 0.0) continue;
      const VarMap& vm = vmap[j];
      if (vm.split) {
        a(row, vm.col) += cij;
        a(row, vm.col + 1) -= cij;
      } else {
        a(row, vm.col) += cij * vm.sign;
        b[row] -= cij * vm.shift;
      }
    }
  };

  int row = 0;
  for (int i = 0; i < m_ub; ++i, ++row) {
    fill_row(row, p.a_ub.row(i), p.b_ub[i]);
    a(row, nstruct + row) = 1.0;
  }
  for (int j = 0; j < n; ++j) {
    if (!vmap[j].split && std::isfinite(p.lb[j]) && std::isfinite(p.ub[j])) {
      a(row, vmap[j].col) = 1.0;
      b[row] = p.ub[j] - p.lb[j];
      a(row, nstruct + row) = 1.0;
      ++row;
    }
  }
  for (int i = 0; i < m_eq; ++i, ++row) fill_row(row, p.a_eq.row(i), p.b_eq[i]);

  Simplex splx(a, b);
  LpResult res;
  if (splx.run_phase1() > kEpsFeas) {
    res.status = LpStatus::kInfeasible;
    return res;
  }
  Vec cost = Vec::Zero(nstruct + nslack);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    if (vm.split) {
      cost[vm.col] += p.c[j];
      cost[vm.col + 1] -= p.c[j];
    } else {
      cost[vm.col] += p.c[j] * vm.sign;
    }
  }
  res.status = splx.run_phase2(cost);
  if (res.status != LpStatus::kOptimal) return res;

  const Vec z = splx.solution();
  res.x = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    res.x[j] = vm.split ? z[vm.col] - z[vm.col + 1]
                        : vm.shift + vm.sign * z[vm.col];
  }
  res.objective = p.c.dot(res.x);
  return res;
}

FarkasResult solve_eq_sign(const Mat& a, const Vec& b,
                           const std::vector<bool>& nonneg) {
  const int n = static_cast<int>(a.cols());
  const int m = static_cast<int>(a.rows());
  if (static_cast<int>(nonneg.size()) != n || b.size() != m)
    throw DimensionError("solve_eq_sign: inconsistent dimensions");

  std::vector<int> col_of(n);
  int nstruct = 0;
  for (int j = 0; j < n; ++j) {
    col_of[j] = nstruct;
    nstruct += nonneg[j] ? 1 : 2;
  }
  Mat a_std = Mat::Zero(m, nstruct);
  for (int j = 0; j < n; ++j) {
    a_std.col(col_of[j]) = a.col(j);
    if (!nonneg[j]) a_std.col(col_of[j] + 1) = -a.col(j);
  }

  Simplex splx(a_std, b);
  FarkasResult res;
  if (splx.run_phase1() > kEpsFeas) {
    res.feasible = false;
    res.y = splx.phase1_dual();
    return res;
  }
  res.feasible = true;
  const Vec z = splx.solution();
  res.x = Vec::Zero(n);
  for (int j = 0; j < n; ++j)
    res.x[j] = nonneg[j] ? z[col_of[j]] : z[col_of[j]] - z[col_of[j] + 1];
  return res;
}

}  // namespace optcert
