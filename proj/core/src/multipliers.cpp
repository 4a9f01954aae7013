#include "optcert/multipliers.hpp"

#include "optcert/linprog.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace optcert {

namespace {

// Columns are gradients of the active inequalities, then all equalities.
Mat active_gradient_cols(const Problem& prob, const Vec& x,
                         const ActiveSet& act) {
  const int k = static_cast<int>(act.indices.size());
  const int p = static_cast<int>(prob.equalities.size());
  Mat m(prob.n, k + p);
  for (int c = 0; c < k; ++c)
    m.col(c) = prob.inequalities[act.indices[c]].gradient(x);
  for (int j = 0; j < p; ++j) m.col(k + j) = prob.equalities[j].gradient(x);
  return m;
}

double min_singular_value(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return kInf;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().minCoeff();
}

MultiplierVector scatter(const Problem& prob, const ActiveSet& act,
                         const Vec& alpha, const Vec& lambda_active,
                         const Vec& mu) {
  MultiplierVector mv;
  mv.alpha = alpha;
  mv.lambda = Vec::Zero(static_cast<int>(prob.inequalities.size()));
  for (int c = 0; c < static_cast<int>(act.indices.size()); ++c)
    mv.lambda[act.indices[c]] = std::max(0.0, lambda_active[c]);
  mv.mu = mu;
  return mv;
}

}  // namespace

std::vector<std::string> feasibility_violations(const Problem& prob,
                                                const Vec& x,
                                                double tol_feas) {
  std::vector<std::string> out;
  if (!prob.box.contains(x, 0.0)) {
    out.push_back("point lies outside the bounding box");
    return out;
  }
  for (int i = 0; i < static_cast<int>(prob.inequalities.size()); ++i) {
    const double v = prob.inequalities[i].eval(x);
    if (v > tol_feas) {
      std::ostringstream os;
      os << "inequality " << i << ": g(x) = " << v << " > " << tol_feas;
      out.push_back(os.str());
    }
  }
  for (int j = 0; j < static_cast<int>(prob.equalities.size()); ++j) {
    const double v = prob.equalities[j].eval(x);
    if (std::fabs(v) > tol_feas) {
      std::ostringstream os;
      os << "equality " << j << ": |h(x)| = " << std::fabs(v) << " > "
         << tol_feas;
      out.push_back(os.str());
    }
  }
  return out;
}

ActiveSet active_set(const Problem& prob, const Vec& x,
                     const Tolerances& tol) {
  auto violations = feasibility_violations(prob, x, tol.feas);
  if (!violations.empty()) throw InfeasibleError(std::move(violations));
  ActiveSet act;
  for (int i = 0; i < static_cast<int>(prob.inequalities.size()); ++i)
    if (prob.inequalities[i].eval(x) >= -tol.act) act.indices.push_back(i);
  return act;
}

KKTResidual kkt_residual(const Problem& prob, const Vec& x,
                         const MultiplierVector& mult) {
  const int q = static_cast<int>(prob.objectives.size());
  const int m = static_cast<int>(prob.inequalities.size());
  const int p = static_cast<int>(prob.equalities.size());
  Vec alpha = mult.alpha;
  if (alpha.size() == 0 && q == 1) alpha = Vec::Ones(1);
  if (alpha.size() != q || mult.lambda.size() != m || mult.mu.size() != p)
    throw DimensionError("multiplier dimensions do not match the problem");

  KKTResidual res;
  res.stationarity = Vec::Zero(prob.n);
  for (int l = 0; l < q; ++l)
    res.stationarity += alpha[l] * prob.objectives[l].gradient(x);
  for (int i = 0; i < m; ++i)
    if (mult.lambda[i] != 0.0)
      res.stationarity += mult.lambda[i] * prob.inequalities[i].gradient(x);
  for (int j = 0; j < p; ++j)
    if (mult.mu[j] != 0.0)
      res.stationarity += mult.mu[j] * prob.equalities[j].gradient(x);
  res.complementarity = Vec::Zero(m);
  for (int i = 0; i < m; ++i)
    res.complementarity[i] = mult.lambda[i] * prob.inequalities[i].eval(x);
  res.stationarity_norm = res.stationarity.norm();
  res.complementarity_norm = res.complementarity.norm();
  return res;
}

MultiplierSearch find_multipliers(const Problem& prob, const Vec& x,
                                  const ActiveSet& act) {
  if (!prob.scalar())
    throw Error("find_multipliers requires a scalar objective");
  const int k = static_cast<int>(act.indices.size());
  const int p = static_cast<int>(prob.equalities.size());

  const Mat cols = active_gradient_cols(prob, x, act);
  const Vec rhs = -prob.objectives[0].gradient(x);
  std::vector<bool> nonneg(k + p, false);
  for (int c = 0; c < k; ++c) nonneg[c] = true;

  const FarkasResult fr = solve_eq_sign(cols, rhs, nonneg);
  MultiplierSearch out;
  if (!fr.feasible) {
    out.farkas = fr.y;
    return out;
  }
  out.mult = scatter(prob, act, Vec::Ones(1), fr.x.head(k), fr.x.tail(p));
  return out;
}

MultiplierSearch find_mop_multipliers(const Problem& prob, const Vec& x,
                                      const ActiveSet& act) {
  const int q = static_cast<int>(prob.objectives.size());
  const int k = static_cast<int>(act.indices.size());
  const int p = static_cast<int>(prob.equalities.size());
  const int n = prob.n;

  Mat a = Mat::Zero(n + 1, q + k + p);
  for (int l = 0; l < q; ++l) {
    a.col(l).head(n) = prob.objectives[l].gradient(x);
    a(n, l) = 1.0;  // normalization: weights sum to one
  }
  a.block(0, q, n, k + p) = active_gradient_cols(prob, x, act);
  Vec b = Vec::Zero(n + 1);
  b[n] = 1.0;
  std::vector<bool> nonneg(q + k + p, false);
  for (int c = 0; c < q + k; ++c) nonneg[c] = true;

  const FarkasResult fr = solve_eq_sign(a, b, nonneg);
  MultiplierSearch out;
  if (!fr.feasible) {
    out.farkas = fr.y;
    return out;
  }
  Vec alpha = fr.x.head(q);
  Vec lambda_active = fr.x.segment(q, k);
  Vec mu = fr.x.tail(p);
  const double s = alpha.sum();
  if (s > 0.0) {  // exact renormalization preserves stationarity
    alpha /= s;
    lambda_active /= s;
    mu /= s;
  }
  out.mult = scatter(prob, act, alpha, lambda_active, mu);
  return out;
}

LicqResult check_licq(const Problem& prob, const Vec& x,
                      const ActiveSet& act) {
  const Mat cols = active_gradient_cols(prob, x, act);
  LicqResult res;
  res.min_singular_value = min_singular_value(cols.transpose());
  if (cols.cols() > cols.rows()) {  // more gradients than dimensions
    res.holds = false;
    return res;
  }
  res.holds = res.min_singular_value > 1e-8;
  return res;
}

MfcqResult check_mfcq(const Problem& prob, const Vec& x,
                      const ActiveSet& act) {
  const int k = static_cast<int>(act.indices.size());
  const int p = static_cast<int>(prob.equalities.size());
  const int n = prob.n;

  MfcqResult res;
  Mat heq(p, n);
  for (int j = 0; j < p; ++j)
    heq.row(j) = prob.equalities[j].gradient(x).transpose();
  res.equalities_independent =
      p == 0 || (p <= n && min_singular_value(heq) > 1e-8);

  // maximize s with grad_g_i . d <= -s on actives, grad_h . d = 0,
  // d in [-1,1]^n, s in [0,1].
  LpProblem lp = LpProblem::make(n + 1);
  lp.c[n] = -1.0;
  for (int i = 0; i < n; ++i) {
    lp.lb[i] = -1.0;
    lp.ub[i] = 1.0;
  }
  lp.lb[n] = 0.0;
  lp.ub[n] = 1.0;
  lp.a_ub = Mat::Zero(k, n + 1);
  lp.b_ub = Vec::Zero(k);
  for (int c = 0; c < k; ++c) {
    lp.a_ub.row(c).head(n) =
        prob.inequalities[act.indices[c]].gradient(x).transpose();
    lp.a_ub(c, n) = 1.0;
  }
  lp.a_eq = Mat::Zero(p, n + 1);
  lp.a_eq.leftCols(n) = heq;
  lp.b_eq = Vec::Zero(p);

  const LpResult sol = solve_lp(lp);
  if (sol.status == LpStatus::kOptimal) {
    res.margin = sol.x[n];
    res.direction = sol.x.head(n);
  }
  res.holds = res.equalities_independent && res.margin > 1e-8;
  return res;
}

namespace {

// Vertices of {w : m w = r, w_i >= 0 for masked i} by support enumeration.
// Free coordinates are always part of the support.
struct PolyVertices {
  std::vector<Vec> vertices;
  bool bounded = false;
};

PolyVertices enumerate_vertices(const Mat& m, const Vec& r,
                                const std::vector<bool>& nonneg) {
  const int ncols = static_cast<int>(m.cols());
  std::vector<int> masked, unmasked;
  for (int j = 0; j < ncols; ++j)
    (nonneg[j] ? masked : unmasked).push_back(j);

  PolyVertices out;
  // Recession cone {d : m d = 0, d_masked >= 0} must be {0} for boundedness:
  // free columns independent and no nonzero masked recession component.
  bool free_indep = true;
  if (!unmasked.empty()) {
    Mat mu(m.rows(), static_cast<int>(unmasked.size()));
    for (std::size_t c = 0; c < unmasked.size(); ++c)
      mu.col(static_cast<int>(c)) = m.col(unmasked[c]);
    free_indep = min_singular_value(mu) > 1e-9;
  }
  bool masked_trivial = true;
  if (!masked.empty() && free_indep && ncols > 0) {
    LpProblem lp = LpProblem::make(ncols);
    for (int j : masked) {
      lp.c[j] = -1.0;  // maximize the masked sum
      lp.lb[j] = 0.0;
      lp.ub[j] = 1.0;
    }
    for (int j : unmasked) {
      lp.lb[j] = -1.0;
      lp.ub[j] = 1.0;
    }
    lp.a_eq = m;
    lp.b_eq = Vec::Zero(m.rows());
    const LpResult sol = solve_lp(lp);
    masked_trivial =
        sol.status == LpStatus::kOptimal && -sol.objective <= 1e-7;
  }
  out.bounded = free_indep && masked_trivial;

  const int nm = static_cast<int>(masked.size());
  for (long sub = 0; sub < (1L << nm); ++sub) {
    std::vector<int> support = unmasked;
    for (int t = 0; t < nm; ++t)
      if (sub & (1L << t)) support.push_back(masked[t]);
    std::sort(support.begin(), support.end());

    Vec w = Vec::Zero(ncols);
    if (!support.empty()) {
      Mat mc(m.rows(), static_cast<int>(support.size()));
      for (std::size_t c = 0; c < support.size(); ++c)
        mc.col(static_cast<int>(c)) = m.col(support[c]);
      Eigen::ColPivHouseholderQR<Mat> qr(mc);
      qr.setThreshold(1e-9);
      if (qr.rank() < static_cast<int>(support.size()))
        continue;  // not a basis: solution not unique on this support
      const Vec wc = qr.solve(r);
      if ((mc * wc - r).lpNorm<Eigen::Infinity>() > 1e-8) continue;
      bool ok = true;
      for (std::size_t c = 0; c < support.size() && ok; ++c)
        if (nonneg[support[c]] && wc[static_cast<int>(c)] < -1e-9) ok = false;
      if (!ok) continue;
      for (std::size_t c = 0; c < support.size(); ++c)
        w[support[c]] = nonneg[support[c]]
                            ? std::max(0.0, wc[static_cast<int>(c)])
                            : wc[static_cast<int>(c)];
    } else if (r.lpNorm<Eigen::Infinity>() > 1e-8) {
      continue;
    }
    bool dup = false;
    for (const Vec& v : out.vertices)
      if ((v - w).lpNorm<Eigen::Infinity>() <= 1e-7) {
        dup = true;
        break;
      }
    if (!dup) out.vertices.push_back(w);
  }
  return out;
}

}  // namespace

VertexEnumeration enumerate_multiplier_vertices(const Problem& prob,
                                                const Vec& x,
                                                const ActiveSet& act) {
  const int q = static_cast<int>(prob.objectives.size());
  const int k = static_cast<int>(act.indices.size());
  const int p = static_cast<int>(prob.equalities.size());
  const int n = prob.n;

  VertexEnumeration out;
  const int masked_count = (prob.scalar() ? 0 : q) + k;
  if (masked_count > 10 || k + p + q > 16) {
    out.note = "multiplier polyhedron too large; vertex enumeration skipped";
    return out;
  }
  out.ran = true;

  if (prob.scalar()) {
    const Mat cols = active_gradient_cols(prob, x, act);
    const Vec rhs = -prob.objectives[0].gradient(x);
    std::vector<bool> nonneg(k + p, false);
    for (int c = 0; c < k; ++c) nonneg[c] = true;
    const PolyVertices pv = enumerate_vertices(cols, rhs, nonneg);
    out.bounded = pv.bounded;
    for (const Vec& w : pv.vertices)
      out.vertices.push_back(
          scatter(prob, act, Vec::Ones(1), w.head(k), w.tail(p)));
  } else {
    Mat a = Mat::Zero(n + 1, q + k + p);
    for (int l = 0; l < q; ++l) {
      a.col(l).head(n) = prob.objectives[l].gradient(x);
      a(n, l) = 1.0;
    }
    a.block(0, q, n, k + p) = active_gradient_cols(prob, x, act);
    Vec b = Vec::Zero(n + 1);
    b[n] = 1.0;
    std::vector<bool> nonneg(q + k + p, false);
    for (int c = 0; c < q + k; ++c) nonneg[c] = true;
    const PolyVertices pv = enumerate_vertices(a, b, nonneg);
    out.bounded = pv.bounded;
    for (const Vec& w : pv.vertices)
      out.vertices.push_back(
          scatter(prob, act, w.head(q), w.segment(q, k), w.tail(p)));
  }
  out.count = static_cast<int>(out.vertices.size());
  return out;
}

}  // namespace optcert
