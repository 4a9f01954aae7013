#include "optcert/oracle.hpp"

#include "optcert/multipliers.hpp"
#include "optcert/rng.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace optcert {

namespace {

constexpr long kFeasibleThreshold = 100;

double gap_value(const Problem& prob, const std::vector<double>& base,
                 const Vec& s) {
  double g = -std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < prob.objectives.size(); ++l)
    g = std::max(g, prob.objectives[l].eval(s) - base[l]);
  return g;
}

// 10 Gauss-Newton steps toward {h = 0}; each step solves the linearized
// system in the least-squares minimum-norm sense.
Vec project_equalities(const Problem& prob, Vec s) {
  const int p = static_cast<int>(prob.equalities.size());
  if (p == 0) return s;
  const int n = prob.n;
  for (int it = 0; it < 10; ++it) {
    Vec h(p);
    Mat jac(p, n);
    try {
      for (int j = 0; j < p; ++j) {
        h[j] = prob.equalities[j].eval(s);
        jac.row(j) = prob.equalities[j].gradient(s).transpose();
      }
    } catch (const NoCellError&) {
      return s;  // left the covered region; the filter will reject it
    }
    if (h.lpNorm<Eigen::Infinity>() < 1e-14) break;
    s -= jac.completeOrthogonalDecomposition().solve(h);
  }
  return s;
}

bool passes_filter(const Problem& prob, const Vec& s, double scaled_tol) {
  if (!prob.box.contains(s, 1e-12)) return false;
  try {
    for (const auto& g : prob.inequalities)
      if (g.eval(s) > scaled_tol) return false;
    for (const auto& h : prob.equalities)
      if (std::abs(h.eval(s)) > scaled_tol) return false;
  } catch (const NoCellError&) {
    return false;
  }
  return true;
}

std::vector<double> base_values(const Problem& prob, const Vec& xbar) {
  std::vector<double> base;
  base.reserve(prob.objectives.size());
  for (const auto& phi : prob.objectives) base.push_back(phi.eval(xbar));
  return base;
}

void require_feasible(const Problem& prob, const Vec& xbar, double tol_feas) {
  std::vector<std::string> v = feasibility_violations(prob, xbar, tol_feas);
  if (!v.empty()) throw InfeasibleError(std::move(v));
}

}  // namespace

GrowthEstimate empirical_growth(const Problem& prob, const Vec& xbar,
                                double radius, long count, unsigned seed,
                                double tol_feas) {
  require_feasible(prob, xbar, tol_feas);
  std::vector<double> base = base_values(prob, xbar);
  const double scaled_tol = tol_feas * radius;

  GrowthEstimate est;
  est.radius = radius;
  est.samples = count;
  Rng rng(seed);
  for (long k = 0; k < count; ++k) {
    Vec s = xbar + rng.ball_point(prob.n, radius);
    s = project_equalities(prob, s);
    if (!passes_filter(prob, s, scaled_tol)) continue;
    ++est.feasible_count;
    double dist2 = (s - xbar).squaredNorm();
    if (dist2 <= 0.0) continue;
    double gap;
    try {
      gap = gap_value(prob, base, s);
    } catch (const NoCellError&) {
      --est.feasible_count;
      continue;
    }
    double ratio = 2.0 * gap / dist2;
    if (ratio < est.rho_emp) {
      est.rho_emp = ratio;
      est.argmin = s;
    }
  }
  if (est.feasible_count < kFeasibleThreshold)
    throw TooFewFeasibleError(est.feasible_count);
  return est;
}

LocalMinCheck empirical_local_min(const Problem& prob, const Vec& xbar,
                                  double radius, long count, unsigned seed,
                                  double tol_feas) {
  require_feasible(prob, xbar, tol_feas);
  std::vector<double> base = base_values(prob, xbar);
  const double scaled_tol = tol_feas * radius;

  LocalMinCheck check;
  check.worst_gap = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (long k = 0; k < count; ++k) {
    Vec s = xbar + rng.ball_point(prob.n, radius);
    s = project_equalities(prob, s);
    if (!passes_filter(prob, s, scaled_tol)) continue;
    double gap;
    try {
      gap = gap_value(prob, base, s);
    } catch (const NoCellError&) {
      continue;
    }
    ++check.feasible_count;
    if (gap < check.worst_gap) {
      check.worst_gap = gap;
      check.worst = s;
    }
  }
  if (check.feasible_count < kFeasibleThreshold)
    throw TooFewFeasibleError(check.feasible_count);
  check.holds = check.worst_gap >= -1e-10;
  return check;
}

std::vector<Vec> contingent_probe(const Problem& prob, const Vec& xbar,
                                  long count, unsigned seed, double tol_feas) {
  require_feasible(prob, xbar, tol_feas);
  const double radii[4] = {1e-2, 1e-3, 1e-4, 1e-5};
  const long per_radius = std::max<long>(1, count / 4);

  std::vector<Vec> dirs;
  long usable = 0;
  Rng rng(seed);
  for (double radius : radii) {
    const double scaled_tol = tol_feas * radius;
    for (long k = 0; k < per_radius; ++k) {
      Vec s = xbar + rng.ball_point(prob.n, radius);
      s = project_equalities(prob, s);
      if (!passes_filter(prob, s, scaled_tol)) continue;
      double dist = (s - xbar).norm();
      if (dist <= 0.0) continue;
      ++usable;
      Vec d = (s - xbar) / dist;
      bool clustered = false;
      for (const Vec& u : dirs)
        if ((d - u).norm() <= 1e-3) {
          clustered = true;
          break;
        }
      if (!clustered) dirs.push_back(std::move(d));
    }
  }
  if (usable < kFeasibleThreshold) throw TooFewFeasibleError(usable);
  std::sort(dirs.begin(), dirs.end(), [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  });
  return dirs;
}

}  // namespace optcert
