#include "optcert/bundle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace optcert {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDedupTol = 1e-12;
constexpr int kMaxRefinedCells = 10000;

}  // namespace

std::vector<Vec> HessianBundle::apply(const Vec& v) const {
  std::vector<Vec> out;
  out.reserve(matrices.size());
  for (const Mat& h : matrices) out.push_back(h * v);
  return out;
}

double HessianBundle::qmax(const Vec& v) const {
  double best = -kInf;
  for (const Mat& h : matrices) best = std::max(best, v.dot(h * v));
  return best;
}

double HessianBundle::qmin(const Vec& v) const {
  double best = kInf;
  for (const Mat& h : matrices) best = std::min(best, v.dot(h * v));
  return best;
}

double HessianBundle::min_eigenvalue() const {
  double best = kInf;
  for (const Mat& h : matrices) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    best = std::min(best, es.eigenvalues().minCoeff());
  }
  return best;
}

HessianBundle bundle(const PiecewiseFn& f, const Vec& x, double tol_cell) {
  std::vector<int> cells = f.active_cells(x, tol_cell);
  if (cells.empty())
    throw NoCellError("no cell is active at the requested point");
  std::sort(cells.begin(), cells.end());
  HessianBundle out;
  for (int ci : cells) {
    Mat h = f.pieces()[ci].poly.hessian(x);
    h = 0.5 * (h + h.transpose()).eval();
    bool dup = false;
    for (const Mat& g : out.matrices)
      if ((g - h).norm() <= kDedupTol) {
        dup = true;
        break;
      }
    if (dup) continue;
    out.matrices.push_back(std::move(h));
    out.source_cells.push_back(ci);
  }
  return out;
}

PiecewiseFn lagrangian(const Problem& prob, const MultiplierVector& mult) {
  const int n = prob.n;
  struct Partial {
    std::vector<Halfspace> guards;
    Polynomial poly;
  };
  std::vector<Partial> cells;
  cells.push_back({{}, Polynomial::zero(n)});

  auto fold = [&](const PiecewiseFn& fn, double w) {
    if (fn.single_piece() && fn.pieces()[0].cell.guards.empty()) {
      for (auto& c : cells) c.poly.add_scaled(fn.pieces()[0].poly, w);
      return;
    }
    std::vector<Partial> next;
    for (const auto& c : cells) {
      for (const auto& pc : fn.pieces()) {
        std::vector<Halfspace> guards = c.guards;
        guards.insert(guards.end(), pc.cell.guards.begin(),
                      pc.cell.guards.end());
        if (chebyshev_ball(guards, prob.box).radius <= 1e-9) continue;
        Partial p{std::move(guards), c.poly};
        p.poly.add_scaled(pc.poly, w);
        next.push_back(std::move(p));
        if (static_cast<int>(next.size()) > kMaxRefinedCells)
          throw RefinementError("common cell refinement exceeds " +
                                std::to_string(kMaxRefinedCells) + " cells");
      }
    }
    cells = std::move(next);
  };

  const Vec& alpha = mult.alpha;
  for (std::size_t l = 0; l < prob.objectives.size(); ++l) {
    double w = l < static_cast<std::size_t>(alpha.size()) ? alpha[l]
               : prob.objectives.size() == 1               ? 1.0
                                                           : 0.0;
    fold(prob.objectives[l], w);
  }
  for (std::size_t i = 0; i < prob.inequalities.size(); ++i)
    fold(prob.inequalities[i],
         i < static_cast<std::size_t>(mult.lambda.size()) ? mult.lambda[i]
                                                          : 0.0);
  for (std::size_t j = 0; j < prob.equalities.size(); ++j)
    fold(prob.equalities[j],
         j < static_cast<std::size_t>(mult.mu.size()) ? mult.mu[j] : 0.0);

  std::vector<Piece> pieces;
  pieces.reserve(cells.size());
  for (auto& c : cells)
    pieces.push_back({Cell{std::move(c.guards)}, std::move(c.poly)});
  return PiecewiseFn(n, std::move(pieces));
}

TaylorCheck taylor_check(const PiecewiseFn& f, const Vec& a, const Vec& b,
                         double tol) {
  const Vec d = b - a;
  TaylorCheck out;
  out.delta = f.eval(b) - f.eval(a) - f.gradient(a).dot(d);

  // Parameters where the segment crosses a guard hyperplane.
  std::vector<double> ts{0.0, 1.0};
  if (d.size() > 0 && d.lpNorm<Eigen::Infinity>() > 0.0) {
    for (const auto& pc : f.pieces())
      for (const auto& g : pc.cell.guards) {
        double slope = g.a.dot(d);
        if (std::abs(slope) < 1e-14) continue;
        double t = -(g.a.dot(a) + g.b) / slope;
        if (t > 1e-12 && t < 1.0 - 1e-12) ts.push_back(t);
      }
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double u, double v) { return std::abs(u - v) <= 1e-12; }),
           ts.end());

  double qlo = kInf, qhi = -kInf;
  auto absorb = [&](double t) {
    HessianBundle bd = bundle(f, a + t * d, 1e-9);
    for (const Mat& h : bd.matrices) {
      double q = d.dot(h * d);
      qlo = std::min(qlo, q);
      qhi = std::max(qhi, q);
    }
  };
  for (double t : ts) absorb(t);
  for (std::size_t k = 0; k + 1 < ts.size(); ++k)
    for (int j = 1; j <= 16; ++j)
      absorb(ts[k] + (ts[k + 1] - ts[k]) * static_cast<double>(j) / 17.0);

  out.lower = 0.5 * qlo;
  out.upper = 0.5 * qhi;
  out.pass = out.delta >= out.lower - tol && out.delta <= out.upper + tol;
  return out;
}

namespace {

// q(t) = m + A cos 2t + B sin 2t is v'Hv at v = (cos t, sin t).
struct Sinusoid {
  double m = 0.0, a = 0.0, b = 0.0;
};

Sinusoid sinusoid_of(const Mat& h) {
  Sinusoid s;
  s.m = 0.5 * (h(0, 0) + h(1, 1));
  s.a = 0.5 * (h(0, 0) - h(1, 1));
  s.b = 0.5 * (h(0, 1) + h(1, 0));
  return s;
}

double eval_sinusoid(const Sinusoid& s, double t) {
  return s.m + s.a * std::cos(2.0 * t) + s.b * std::sin(2.0 * t);
}

void push_in_range(std::vector<double>& ts, double t, double t0, double t1) {
  if (t >= t0 - 1e-12 && t <= t1 + 1e-12)
    ts.push_back(std::min(std::max(t, t0), t1));
}

void stationary_angles(const Sinusoid& s, double t0, double t1,
                       std::vector<double>& ts) {
  if (s.a == 0.0 && s.b == 0.0) return;
  double base = 0.5 * std::atan2(s.b, s.a);
  double step = 0.5 * kPi;
  long k0 = static_cast<long>(std::floor((t0 - base) / step)) - 1;
  long k1 = static_cast<long>(std::ceil((t1 - base) / step)) + 1;
  for (long k = k0; k <= k1; ++k)
    push_in_range(ts, base + static_cast<double>(k) * step, t0, t1);
}

void crossing_angles(const Sinusoid& p, const Sinusoid& q, double t0,
                     double t1, std::vector<double>& ts) {
  double da = p.a - q.a, db = p.b - q.b, dm = p.m - q.m;
  double r = std::hypot(da, db);
  if (r < 1e-15) return;
  double c = -dm / r;
  if (c < -1.0 || c > 1.0) return;
  double phi = std::atan2(db, da);
  double delta = std::acos(std::min(1.0, std::max(-1.0, c)));
  for (int sgn : {-1, 1}) {
    double base = 0.5 * (phi + sgn * delta);
    long k0 = static_cast<long>(std::floor((t0 - base) / kPi)) - 1;
    long k1 = static_cast<long>(std::ceil((t1 - base) / kPi)) + 1;
    for (long k = k0; k <= k1; ++k)
      push_in_range(ts, base + static_cast<double>(k) * kPi, t0, t1);
  }
}

}  // namespace

ArcMin arc_argmin_single(const Mat& h, double t0, double t1) {
  Sinusoid s = sinusoid_of(h);
  std::vector<double> ts{t0, t1};
  stationary_angles(s, t0, t1, ts);
  ArcMin best{kInf, t0};
  for (double t : ts) {
    double v = eval_sinusoid(s, t);
    if (v < best.value) best = {v, t};
  }
  return best;
}

ArcMin arc_argmin_envelope(const std::vector<Mat>& hs, double t0, double t1) {
  std::vector<Sinusoid> ss;
  ss.reserve(hs.size());
  for (const Mat& h : hs) ss.push_back(sinusoid_of(h));
  std::vector<double> ts{t0, t1};
  for (const auto& s : ss) stationary_angles(s, t0, t1, ts);
  for (std::size_t i = 0; i < ss.size(); ++i)
    for (std::size_t j = i + 1; j < ss.size(); ++j)
      crossing_angles(ss[i], ss[j], t0, t1, ts);
  ArcMin best{kInf, t0};
  for (double t : ts) {
    double env = -kInf;
    for (const auto& s : ss) env = std::max(env, eval_sinusoid(s, t));
    if (env < best.value) best = {env, t};
  }
  return best;
}

double arc_min_single(const Mat& h, double t0, double t1) {
  return arc_argmin_single(h, t0, t1).value;
}

double arc_min_envelope(const std::vector<Mat>& hs, double t0, double t1) {
  return arc_argmin_envelope(hs, t0, t1).value;
}

}  // namespace optcert
