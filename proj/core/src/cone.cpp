#include "optcert/cone.hpp"

#include "optcert/linprog.hpp"
#include "optcert/rng.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace optcert {

namespace {

using Rational = boost::multiprecision::cpp_rational;

template <class S>
struct DdTraits;

template <>
struct DdTraits<double> {
  static bool is_zero(double x) { return std::fabs(x) <= 1e-10; }
  static double abs(double x) { return std::fabs(x); }
};

template <>
struct DdTraits<Rational> {
  static bool is_zero(const Rational& x) { return x == 0; }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
};

template <class S>
using Row = std::vector<S>;

template <class S>
S dot(const Row<S>& a, const Row<S>& b) {
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Basis of {v : row.v == 0 for every row} via Gauss-Jordan elimination.
template <class S>
std::vector<Row<S>> null_space(std::vector<Row<S>> rows, int n) {
  std::vector<int> pivot_cols;
  int r = 0;
  for (int c = 0; c < n && r < static_cast<int>(rows.size()); ++c) {
    int pr = -1;
    S best(0);
    for (int i = r; i < static_cast<int>(rows.size()); ++i) {
      if (DdTraits<S>::is_zero(rows[i][c])) continue;
      const S mag = DdTraits<S>::abs(rows[i][c]);
      if (pr < 0 || mag > best) {
        pr = i;
        best = mag;
      }
    }
    if (pr < 0) continue;
    std::swap(rows[r], rows[pr]);
    const S piv = rows[r][c];
    for (int j = 0; j < n; ++j) rows[r][j] = rows[r][j] / piv;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r) continue;
      const S f = rows[i][c];
      if (DdTraits<S>::is_zero(f)) continue;
      for (int j = 0; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_cols) is_pivot[c] = true;
  std::vector<Row<S>> basis;
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    Row<S> v(n, S(0));
    v[c] = S(1);
    for (int i = 0; i < static_cast<int>(pivot_cols.size()); ++i)
      v[pivot_cols[i]] = S(0) - rows[i][c];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Incremental double description over {w : a.w <= 0 per processed row},
// starting from the whole space. Lineality vectors are consumed one per
// row that cuts them; remaining generators are combined by adjacency.
template <class S>
struct DdState {
  int d;
  std::vector<Row<S>> rays;
  std::vector<Row<S>> lin;
  std::vector<Row<S>> processed;

  explicit DdState(int dim) : d(dim) {
    for (int i = 0; i < d; ++i) {
      Row<S> e(d, S(0));
      e[i] = S(1);
      lin.push_back(std::move(e));
    }
  }

  void add_row(const Row<S>& a) {
    int pivot = -1;
    S best(0);
    for (int j = 0; j < static_cast<int>(lin.size()); ++j) {
      const S s = dot(a, lin[j]);
      if (DdTraits<S>::is_zero(s)) continue;
      const S mag = DdTraits<S>::abs(s);
      if (pivot < 0 || mag > best) {
        pivot = j;
        best = mag;
      }
    }
    if (pivot >= 0) {
      const Row<S> lp = lin[pivot];
      const S sp = dot(a, lp);
      lin.erase(lin.begin() + pivot);
      for (auto& l : lin) {
        const S s = dot(a, l);
        if (DdTraits<S>::is_zero(s)) continue;
        for (int i = 0; i < d; ++i) l[i] -= (s / sp) * lp[i];
      }
      for (auto& r : rays) {
        const S s = dot(a, r);
        if (DdTraits<S>::is_zero(s)) continue;
        for (int i = 0; i < d; ++i) r[i] -= (s / sp) * lp[i];
      }
      Row<S> r0(d);
      const bool flip = sp > S(0);
      for (int i = 0; i < d; ++i) r0[i] = flip ? S(0) - lp[i] : lp[i];
      rays.push_back(std::move(r0));
      processed.push_back(a);
      return;
    }

    std::vector<S> val(rays.size(), S(0));
    std::vector<int> inside, boundary, outside;
    for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
      val[i] = dot(a, rays[i]);
      if (DdTraits<S>::is_zero(val[i]))
        boundary.push_back(i);
      else if (val[i] < S(0))
        inside.push_back(i);
      else
        outside.push_back(i);
    }
    if (outside.empty()) {
      processed.push_back(a);
      return;
    }

    std::vector<std::vector<bool>> zsets(rays.size());
    for (int i = 0; i < static_cast<int>(rays.size()); ++i) {
      zsets[i].resize(processed.size());
      for (std::size_t k = 0; k < processed.size(); ++k)
        zsets[i][k] = DdTraits<S>::is_zero(dot(processed[k], rays[i]));
    }
    auto adjacent = [&](int p, int q) {
      if (static_cast<int>(rays.size()) <= 2) return true;
      for (int r = 0; r < static_cast<int>(rays.size()); ++r) {
        if (r == p || r == q) continue;
        bool covers = true;
        for (std::size_t k = 0; k < processed.size() && covers; ++k)
          if (zsets[p][k] && zsets[q][k] && !zsets[r][k]) covers = false;
        if (covers) return false;
      }
      return true;
    };

    std::vector<Row<S>> next;
    for (int i : inside) next.push_back(rays[i]);
    for (int i : boundary) next.push_back(rays[i]);
    for (int p : inside) {
      for (int q : outside) {
        if (!adjacent(p, q)) continue;
        Row<S> nr(d);
        bool nonzero = false;
        for (int i = 0; i < d; ++i) {
          nr[i] = val[q] * rays[p][i] - val[p] * rays[q][i];
          nonzero = nonzero || !DdTraits<S>::is_zero(nr[i]);
        }
        if (nonzero) next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
    processed.push_back(a);
  }
};

template <class S>
struct DdOutcome {
  std::vector<Row<S>> rays;
  std::vector<Row<S>> lin;
};

template <class S>
DdOutcome<S> run_dd(const std::vector<Row<S>>& eq_rows,
                    const std::vector<Row<S>>& leq_rows, int n) {
  DdOutcome<S> out;
  const auto nbasis = null_space(eq_rows, n);
  const int d = static_cast<int>(nbasis.size());
  if (d == 0) return out;

  DdState<S> st(d);
  for (const auto& a : leq_rows) {
    Row<S> ar(d, S(0));
    bool nonzero = false;
    for (int j = 0; j < d; ++j) {
      ar[j] = dot(a, nbasis[j]);
      nonzero = nonzero || !DdTraits<S>::is_zero(ar[j]);
    }
    if (nonzero) st.add_row(ar);
  }
  auto lift = [&](const Row<S>& w) {
    Row<S> full(n, S(0));
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < n; ++i) full[i] += w[j] * nbasis[j][i];
    return full;
  };
  for (const auto& r : st.rays) out.rays.push_back(lift(r));
  for (const auto& l : st.lin) out.lin.push_back(lift(l));
  return out;
}

// Small-denominator rational reconstruction via continued fractions.
std::optional<Rational> to_small_rational(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational(0);
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int it = 0; it < 48; ++it) {
    const double fa = std::floor(v);
    if (std::fabs(fa) > 1e9) return std::nullopt;
    const long long a = static_cast<long long>(fa);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > 1000000 || std::llabs(p2) > (1LL << 52)) return std::nullopt;
    if (std::fabs(x - static_cast<double>(p2) / static_cast<double>(q2)) <=
        tol)
      return Rational(p2, q2);
    const double frac = v - fa;
    if (frac < 1e-15) return std::nullopt;
    v = 1.0 / frac;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::nullopt;
}

bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

// Unit rays orthogonal to the lineality space, deduplicated, stripped of
// redundant generators, lexicographically sorted; orthonormal lineality
// with a fixed sign convention.
RayBasis canonicalize(int n, const std::vector<Vec>& rays_in,
                      const std::vector<Vec>& lin_in) {
  RayBasis out;
  Mat lmat(n, 0);
  if (!lin_in.empty()) {
    Mat raw(n, static_cast<int>(lin_in.size()));
    for (int c = 0; c < static_cast<int>(lin_in.size()); ++c)
      raw.col(c) = lin_in[c];
    Eigen::ColPivHouseholderQR<Mat> qr(raw);
    qr.setThreshold(1e-9);
    const int rank = static_cast<int>(qr.rank());
    Mat q = qr.householderQ() * Mat::Identity(n, rank);
    for (int c = 0; c < rank; ++c) {
      Vec v = q.col(c);
      for (int i = 0; i < n; ++i) {
        if (std::fabs(v[i]) > 1e-9) {
          if (v[i] < 0.0) v = -v;
          break;
        }
      }
      out.lineality.push_back(v);
    }
    std::sort(out.lineality.begin(), out.lineality.end(), lex_less);
    lmat.resize(n, static_cast<int>(out.lineality.size()));
    for (int c = 0; c < static_cast<int>(out.lineality.size()); ++c)
      lmat.col(c) = out.lineality[c];
  }

  for (const Vec& r_in : rays_in) {
    Vec r = r_in;
    if (lmat.cols() > 0) r -= lmat * (lmat.transpose() * r);
    const double norm = r.norm();
    if (norm <= 1e-9) continue;
    r /= norm;
    bool dup = false;
    for (const Vec& s : out.rays)
      if ((s - r).lpNorm<Eigen::Infinity>() <= 1e-9) {
        dup = true;
        break;
      }
    if (!dup) out.rays.push_back(r);
  }

  // Drop rays expressible as combinations of the remaining generators.
  bool changed = true;
  while (changed && out.rays.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < out.rays.size(); ++i) {
      const int cols =
          static_cast<int>(out.rays.size()) - 1 + lmat.cols();
      if (cols == 0) break;
      Mat a(n, cols);
      std::vector<bool> nonneg(cols, false);
      int c = 0;
      for (std::size_t j = 0; j < out.rays.size(); ++j) {
        if (j == i) continue;
        a.col(c) = out.rays[j];
        nonneg[c] = true;
        ++c;
      }
      for (int j = 0; j < lmat.cols(); ++j) a.col(c++) = lmat.col(j);
      if (solve_eq_sign(a, out.rays[i], nonneg).feasible) {
        out.rays.erase(out.rays.begin() + static_cast<long>(i));
        changed = true;
        break;
      }
    }
  }
  std::sort(out.rays.begin(), out.rays.end(), lex_less);
  return out;
}

void split_rows(const LinearCone& cone, std::vector<Vec>& eq,
                std::vector<Vec>& leq) {
  for (const auto& row : cone.rows())
    (row.rel == Relation::kEq ? eq : leq).push_back(row.a);
}

}  // namespace

LinearCone::LinearCone(int n, std::vector<ConeRow> rows) : n_(n) {
  if (n_ <= 0) throw DimensionError("cone dimension must be positive");
  for (auto& row : rows) {
    if (row.a.size() != n_)
      throw DimensionError("cone row dimension mismatch");
    const double scale = row.a.lpNorm<Eigen::Infinity>();
    if (scale == 0.0) {
      ++dropped_;
      continue;
    }
    row.a /= scale;
    bool dup = false;
    for (const auto& kept : rows_)
      if (kept.rel == row.rel &&
          (kept.a - row.a).lpNorm<Eigen::Infinity>() <= 1e-12) {
        dup = true;
        break;
      }
    if (!dup) rows_.push_back(std::move(row));
  }
}

bool LinearCone::contains(const Vec& v, double tol) const {
  for (const auto& row : rows_) {
    const double s = row.a.dot(v);
    if (row.rel == Relation::kLeq ? s > tol : std::fabs(s) > tol)
      return false;
  }
  return true;
}

LinearCone linearization_cone(const Problem& prob, const Vec& x,
                              const ActiveSet& act) {
  std::vector<ConeRow> rows;
  for (int i : act.indices)
    rows.push_back({prob.inequalities[i].gradient(x), Relation::kLeq});
  for (const auto& h : prob.equalities)
    rows.push_back({h.gradient(x), Relation::kEq});
  return LinearCone(prob.n, std::move(rows));
}

LinearCone x0_cone(const Problem& prob, const Vec& x, const ActiveSet& act,
                   const Vec& lambda, double tol_mult) {
  std::vector<ConeRow> rows;
  for (int i : act.indices) {
    const Relation rel =
        lambda[i] > tol_mult ? Relation::kEq : Relation::kLeq;
    rows.push_back({prob.inequalities[i].gradient(x), rel});
  }
  for (const auto& h : prob.equalities)
    rows.push_back({h.gradient(x), Relation::kEq});
  return LinearCone(prob.n, std::move(rows));
}

LinearCone critical_cone(const Problem& prob, const Vec& x,
                         const ActiveSet& act) {
  if (!prob.scalar())
    throw Error("critical_cone requires a scalar objective");
  std::vector<ConeRow> rows;
  rows.push_back({prob.objectives[0].gradient(x), Relation::kEq});
  for (int i : act.indices)
    rows.push_back({prob.inequalities[i].gradient(x), Relation::kLeq});
  for (const auto& h : prob.equalities)
    rows.push_back({h.gradient(x), Relation::kEq});
  return LinearCone(prob.n, std::move(rows));
}

CriticalUnion mop_critical_union(const Problem& prob, const Vec& x,
                                 const ActiveSet& act) {
  CriticalUnion out;
  const int q = static_cast<int>(prob.objectives.size());
  for (int l = 0; l < q; ++l) {
    std::vector<ConeRow> rows;
    rows.push_back({prob.objectives[l].gradient(x), Relation::kEq});
    for (int k = 0; k < q; ++k)
      if (k != l)
        rows.push_back({prob.objectives[k].gradient(x), Relation::kLeq});
    for (int i : act.indices)
      rows.push_back({prob.inequalities[i].gradient(x), Relation::kLeq});
    for (const auto& h : prob.equalities)
      rows.push_back({h.gradient(x), Relation::kEq});
    out.components.push_back({l, LinearCone(prob.n, std::move(rows))});
  }
  return out;
}

RayBasis extreme_rays(const LinearCone& cone) {
  const int n = cone.dim();
  if (n > 8)
    throw DimensionError(
        "extreme ray enumeration supports dimension <= 8, got " +
        std::to_string(n));

  std::vector<Vec> eq, leq;
  split_rows(cone, eq, leq);

  bool rational_ok = true;
  std::vector<Row<Rational>> eq_r, leq_r;
  for (const auto* group : {&eq, &leq}) {
    for (const Vec& a : *group) {
      Row<Rational> row(n);
      for (int i = 0; i < n && rational_ok; ++i) {
        auto r = to_small_rational(a[i]);
        if (!r)
          rational_ok = false;
        else
          row[i] = *r;
      }
      if (!rational_ok) break;
      (group == &eq ? eq_r : leq_r).push_back(std::move(row));
    }
    if (!rational_ok) break;
  }

  std::vector<Vec> rays, lin;
  if (rational_ok) {
    const auto dd = run_dd<Rational>(eq_r, leq_r, n);
    auto to_vec = [n](const Row<Rational>& w) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = w[i].convert_to<double>();
      return v;
    };
    for (const auto& r : dd.rays) rays.push_back(to_vec(r));
    for (const auto& l : dd.lin) lin.push_back(to_vec(l));
  } else {
    std::vector<Row<double>> eq_d, leq_d;
    for (const Vec& a : eq)
      eq_d.emplace_back(a.data(), a.data() + n);
    for (const Vec& a : leq)
      leq_d.emplace_back(a.data(), a.data() + n);
    const auto dd = run_dd<double>(eq_d, leq_d, n);
    auto to_vec = [n](const Row<double>& w) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = w[i];
      return v;
    };
    for (const auto& r : dd.rays) rays.push_back(to_vec(r));
    for (const auto& l : dd.lin) lin.push_back(to_vec(l));
  }
  return canonicalize(n, rays, lin);
}

bool is_trivial(const LinearCone& cone) {
  const int n = cone.dim();
  if (cone.whole_space()) return false;

  int n_leq = 0, n_eq = 0;
  for (const auto& row : cone.rows())
    (row.rel == Relation::kLeq ? n_leq : n_eq) += 1;
  Mat a_ub(n_leq, n), a_eq(n_eq, n);
  int iu = 0, ie = 0;
  for (const auto& row : cone.rows()) {
    if (row.rel == Relation::kLeq)
      a_ub.row(iu++) = row.a.transpose();
    else
      a_eq.row(ie++) = row.a.transpose();
  }

  for (int i = 0; i < n; ++i) {
    for (double sgn : {1.0, -1.0}) {
      LpProblem p = LpProblem::make(n);
      p.c = Vec::Zero(n);
      p.c[i] = -sgn;  // maximize sgn * v_i
      p.a_ub = a_ub;
      p.b_ub = Vec::Zero(n_leq);
      p.a_eq = a_eq;
      p.b_eq = Vec::Zero(n_eq);
      p.lb = Vec::Constant(n, -1.0);
      p.ub = Vec::Constant(n, 1.0);
      const LpResult res = solve_lp(p);
      if (res.status == LpStatus::kOptimal && -res.objective > 1e-9)
        return false;
    }
  }
  return true;
}

std::vector<Vec> sample_directions(const RayBasis& basis, int count,
                                   unsigned seed) {
  if (basis.trivial())
    throw TrivialConeError("cannot sample directions from the trivial cone");
  const int n = static_cast<int>(
      basis.rays.empty() ? basis.lineality[0].size() : basis.rays[0].size());

  std::vector<Vec> out;
  auto push_unit = [&out](Vec v) {
    const double norm = v.norm();
    if (norm > 1e-12) out.push_back(v / norm);
  };
  for (const Vec& r : basis.rays) push_unit(r);
  for (const Vec& l : basis.lineality) {
    push_unit(l);
    push_unit(-l);
  }

  Rng rng(seed);
  long attempts = 0;
  const long max_attempts = 64L * count + 1024;
  while (static_cast<int>(out.size()) < count && attempts++ < max_attempts) {
    Vec v = Vec::Zero(n);
    for (const Vec& r : basis.rays) v += rng.uniform() * r;
    for (const Vec& l : basis.lineality) v += rng.normal() * l;
    push_unit(std::move(v));
  }
  return out;
}

Mat span_basis(const RayBasis& basis) {
  const int total =
      static_cast<int>(basis.rays.size() + basis.lineality.size());
  if (total == 0) return Mat(0, 0);
  const int n = static_cast<int>(
      basis.rays.empty() ? basis.lineality[0].size() : basis.rays[0].size());
  Mat raw(n, total);
  int c = 0;
  for (const Vec& r : basis.rays) raw.col(c++) = r;
  for (const Vec& l : basis.lineality) raw.col(c++) = l;
  Eigen::ColPivHouseholderQR<Mat> qr(raw);
  qr.setThreshold(1e-9);
  const int rank = static_cast<int>(qr.rank());
  return qr.householderQ() * Mat::Identity(n, rank);
}

}  // namespace optcert
