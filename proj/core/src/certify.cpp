#include "optcert/certify.hpp"

#include "optcert/linprog.hpp"
#include "optcert/rng.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace optcert {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFonTol = 1e-9;
constexpr double kResidualTol = 1e-9;

}  // namespace

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::kFon:
      return "FON";
    case ConditionId::kSon:
      return "SON";
    case ConditionId::kSonIsolated:
      return "SON_ISOLATED";
    case ConditionId::kSos:
      return "SOS";
    case ConditionId::kMopFon:
      return "MOP_FON";
    case ConditionId::kMopSos:
      return "MOP_SOS";
  }
  return "?";
}

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::kProved:
      return "PROVED";
    case CertStatus::kPassSampled:
      return "PASS_SAMPLED";
    case CertStatus::kFailWitness:
      return "FAIL_WITNESS";
    case CertStatus::kVacuous:
      return "VACUOUS";
    case CertStatus::kInconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

std::vector<std::string> CqEvidence::tags() const {
  std::vector<std::string> t;
  if (mscq_asserted) t.push_back("MSCQ_USER");
  if (licq.holds) t.push_back("LICQ_VERIFIED");
  if (mfcq.holds) t.push_back("MFCQ_VERIFIED");
  return t;
}

namespace {

// Flip so the first significant entry is positive; only valid when the
// containing cone is symmetric (subspaces).
Vec sign_normalized(Vec v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-9) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

ConeSummary summarize(const LinearCone& cone) {
  ConeSummary s;
  s.rows = cone.rows();
  s.trivial = is_trivial(cone);
  if (s.trivial) return s;
  try {
    s.basis = extreme_rays(cone);
    s.basis_computed = true;
  } catch (const Error& e) {
    s.note = e.what();
  }
  return s;
}

void add_cone_rows(LpProblem& lp, const LinearCone& cone) {
  const int n = cone.dim();
  for (const auto& row : cone.rows()) {
    if (row.rel == Relation::kLeq) {
      lp.a_ub.conservativeResize(lp.a_ub.rows() + 1, n);
      lp.a_ub.row(lp.a_ub.rows() - 1) = row.a.transpose();
      lp.b_ub.conservativeResize(lp.b_ub.size() + 1);
      lp.b_ub[lp.b_ub.size() - 1] = 0.0;
    } else {
      lp.a_eq.conservativeResize(lp.a_eq.rows() + 1, n);
      lp.a_eq.row(lp.a_eq.rows() - 1) = row.a.transpose();
      lp.b_eq.conservativeResize(lp.b_eq.size() + 1);
      lp.b_eq[lp.b_eq.size() - 1] = 0.0;
    }
  }
}

// Directions from seeded LP probes; used when the generator representation
// is unavailable (dimension above the double-description cap).
std::vector<Vec> shoot_directions(const LinearCone& cone, int count,
                                  unsigned seed) {
  std::vector<Vec> dirs;
  Rng rng(seed ^ 0x9e3779b9u);
  const int n = cone.dim();
  for (int k = 0; k < 4 * count && static_cast<int>(dirs.size()) < count;
       ++k) {
    LpProblem lp = LpProblem::make(n);
    lp.c = rng.sphere_point(n);
    lp.lb.setConstant(-1.0);
    lp.ub.setConstant(1.0);
    add_cone_rows(lp, cone);
    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::kOptimal) continue;
    if (res.x.norm() <= 1e-9) continue;
    Vec v = res.x.normalized();
    bool dup = false;
    for (const Vec& u : dirs)
      if ((u - v).lpNorm<Eigen::Infinity>() <= 1e-9) {
        dup = true;
        break;
      }
    if (!dup) dirs.push_back(std::move(v));
  }
  return dirs;
}

struct Scan {
  bool exact = false;
  bool sampled = false;
  double value = kInf;
  Vec argmin;
  std::string method;
  std::string note;
};

// Minimum over unit directions of the cone of the per-direction aggregate:
// envelope = true takes max over the bundle (necessary checks), false takes
// min (sufficient checks). Closed form on subspaces and on cones of
// effective dimension <= 2; otherwise seeded sampling.
Scan scan_directions(const HessianBundle& bd, const LinearCone& cone,
                     const ConeSummary& cs, bool envelope,
                     const CertifyOptions& opts) {
  Scan scan;
  auto aggregate = [&](const Vec& v) {
    return envelope ? bd.qmax(v) : bd.qmin(v);
  };

  if (cs.basis_computed) {
    const RayBasis& basis = cs.basis;
    Mat b = span_basis(basis);
    const int d = static_cast<int>(b.cols());
    const bool subspace =
        basis.rays.empty() && static_cast<int>(basis.lineality.size()) == d;

    if (subspace && (!envelope || bd.matrices.size() == 1)) {
      // min over the unit sphere of a subspace of min_H v'Hv equals the
      // smallest eigenvalue of the restricted matrices.
      double best = kInf;
      Vec bestv;
      for (const Mat& h : bd.matrices) {
        Mat r = b.transpose() * h * b;
        r = 0.5 * (r + r.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(r);
        double lmin = es.eigenvalues().minCoeff();
        if (lmin < best) {
          int idx = 0;
          es.eigenvalues().minCoeff(&idx);
          best = lmin;
          bestv = b * es.eigenvectors().col(idx);
        }
      }
      scan.exact = true;
      scan.value = best;
      scan.argmin = sign_normalized(bestv.normalized());
      scan.method = "eigenvalue";
      return scan;
    }

    if (d == 1) {
      std::vector<Vec> dirs;
      for (const Vec& r : basis.rays) dirs.push_back(r);
      for (const Vec& l : basis.lineality) {
        dirs.push_back(l);
        dirs.push_back(-l);
      }
      for (const Vec& v : dirs) {
        double q = aggregate(v);
        if (q < scan.value) {
          scan.value = q;
          scan.argmin = v;
        }
      }
      scan.exact = true;
      scan.method = "ray";
      return scan;
    }

    if (d == 2) {
      Mat b2(cone.dim(), 2);
      double t0 = 0.0, t1 = 0.0;
      bool ok = false;
      if (basis.rays.size() == 2 && basis.lineality.empty()) {
        const Vec& r1 = basis.rays[0];
        const Vec& r2 = basis.rays[1];
        Vec u2 = r2 - r2.dot(r1) * r1;
        double nu = u2.norm();
        if (nu > 1e-9) {
          u2 /= nu;
          b2.col(0) = r1;
          b2.col(1) = u2;
          t0 = 0.0;
          t1 = std::atan2(r2.dot(u2), r2.dot(r1));
          ok = t1 > 0.0;
        }
      } else if (basis.rays.size() == 1 && basis.lineality.size() == 1) {
        b2.col(0) = basis.rays[0];
        b2.col(1) = basis.lineality[0];
        t0 = -0.5 * kPi;
        t1 = 0.5 * kPi;
        ok = true;
      } else if (basis.rays.empty() && basis.lineality.size() == 2) {
        b2.col(0) = basis.lineality[0];
        b2.col(1) = basis.lineality[1];
        t0 = 0.0;
        t1 = kPi;
        ok = true;
      }
      if (ok) {
        std::vector<Mat> restricted;
        restricted.reserve(bd.matrices.size());
        for (const Mat& h : bd.matrices) {
          Mat r = b2.transpose() * h * b2;
          restricted.push_back(0.5 * (r + r.transpose()).eval());
        }
        ArcMin am{kInf, t0};
        if (envelope) {
          am = arc_argmin_envelope(restricted, t0, t1);
        } else {
          for (const Mat& r : restricted) {
            ArcMin one = arc_argmin_single(r, t0, t1);
            if (one.value < am.value) am = one;
          }
        }
        scan.exact = true;
        scan.value = am.value;
        scan.argmin =
            (b2.col(0) * std::cos(am.angle) + b2.col(1) * std::sin(am.angle))
                .normalized();
        scan.method = "arc";
        return scan;
      }
    }

    // Sampled fallback over the generator representation.
    std::vector<Vec> dirs = sample_directions(basis, opts.samples, opts.seed);
    for (const Vec& v : dirs) {
      double q = aggregate(v);
      if (q < scan.value) {
        scan.value = q;
        scan.argmin = v;
      }
    }
    scan.sampled = true;
    scan.method = "sampled";
    return scan;
  }

  // No generator form: probe extreme points of cone ∩ [-1,1]^n with seeded
  // LP objectives.
  std::vector<Vec> dirs =
      shoot_directions(cone, std::min(opts.samples, 256), opts.seed);
  if (dirs.empty()) {
    scan.note = "no directions found by LP probing";
    return scan;
  }
  for (const Vec& v : dirs) {
    double q = aggregate(v);
    if (q < scan.value) {
      scan.value = q;
      scan.argmin = v;
    }
  }
  scan.sampled = true;
  scan.method = "sampled_lp";
  scan.note = cs.note;
  return scan;
}

void require_valid_multipliers(const Problem& prob, const Vec& x,
                               const MultiplierVector& mult,
                               const Tolerances& tol) {
  KKTResidual res = kkt_residual(prob, x, mult);
  if (res.stationarity_norm > kResidualTol)
    throw NoMultipliersError(
        "multiplier stationarity residual " +
        format_number(res.stationarity_norm) + " exceeds " +
        format_number(kResidualTol));
  if (res.complementarity_norm > tol.act)
    throw NoMultipliersError("multiplier complementarity residual " +
                             format_number(res.complementarity_norm) +
                             " exceeds " + format_number(tol.act));
}

// Downgrade a refutation of a necessary condition when no subregularity
// evidence is available: the witness lives in the linearized cone, which may
// strictly contain the tangent cone.
void downgrade_without_evidence(Certificate& c, const CqEvidence& cq) {
  if (c.status != CertStatus::kFailWitness || cq.any()) return;
  c.status = CertStatus::kInconclusive;
  c.detail = "descent/negative-curvature direction exists in the linearized "
             "cone, but no subregularity evidence (MSCQ assertion or "
             "verified CQ) supports refuting local minimality";
}

Certificate second_order_check(ConditionId id, const Problem& prob,
                               const Vec& x, const ActiveSet& act,
                               const MultiplierVector& mult,
                               const CqEvidence* cq,
                               const CertifyOptions& opts) {
  require_valid_multipliers(prob, x, mult, opts.tol);

  Certificate c;
  c.id = id;
  if (cq) {
    c.assumptions = cq->tags();
    c.assumptions.push_back("ASSUMED_LINEARIZATION");
  }

  LinearCone cone =
      id == ConditionId::kSos
          ? critical_cone(prob, x, act)
          : x0_cone(prob, x, act, mult.lambda, opts.tol.mult);
  ConeSummary cs = summarize(cone);

  PiecewiseFn lf = lagrangian(prob, mult);
  HessianBundle bd = bundle(lf, x, opts.tol.cell);
  c.bundle = bd.matrices;
  c.cone = cs;

  if (cs.trivial) {
    if (id == ConditionId::kSos) {
      // Nothing to check and the conclusion holds: every feasible escape
      // direction already fails first order.
      c.status = CertStatus::kProved;
      c.vacuous = true;
      c.method = "vacuous";
      c.detail = "critical cone is trivial";
    } else {
      c.status = CertStatus::kVacuous;
      c.vacuous = true;
      c.method = "vacuous";
      c.detail = "tightened cone is trivial";
    }
    return c;
  }

  const bool envelope = id != ConditionId::kSos;
  Scan scan = scan_directions(bd, cone, cs, envelope, opts);
  if (!scan.exact && !scan.sampled) {
    c.status = CertStatus::kInconclusive;
    c.detail = scan.note;
    return c;
  }
  c.method = scan.method;
  if (scan.sampled) {
    c.samples = opts.samples;
    c.seed = opts.seed;
  }

  const double tq = opts.tol.q;
  double q = envelope ? bd.qmax(scan.argmin) : bd.qmin(scan.argmin);

  switch (id) {
    case ConditionId::kSon:
      if (scan.value >= -tq) {
        c.status = scan.exact ? CertStatus::kProved : CertStatus::kPassSampled;
      } else {
        c.status = CertStatus::kFailWitness;
        c.witness = Witness{scan.argmin, q};
        if (cq) downgrade_without_evidence(c, *cq);
      }
      break;
    case ConditionId::kSonIsolated:
      if (scan.value > tq) {
        c.status = scan.exact ? CertStatus::kProved : CertStatus::kPassSampled;
      } else {
        c.status = CertStatus::kFailWitness;
        c.witness = Witness{scan.argmin, q};
        if (cq) downgrade_without_evidence(c, *cq);
      }
      break;
    case ConditionId::kSos:
    default:
      if (scan.value > tq) {
        c.status = scan.exact ? CertStatus::kProved : CertStatus::kPassSampled;
        c.modulus = scan.value;
      } else if (scan.value < -tq) {
        c.status = CertStatus::kFailWitness;
        c.witness = Witness{scan.argmin, q};
      } else {
        c.status = CertStatus::kInconclusive;
        c.witness = Witness{scan.argmin, q};
        c.detail = "minimum curvature lies inside the decision band";
      }
      break;
  }
  return c;
}

}  // namespace

Certificate first_order_necessary(const Problem& prob, const Vec& x,
                                  const ActiveSet& act, const CqEvidence& cq,
                                  const CertifyOptions& opts) {
  Certificate c;
  c.id = ConditionId::kFon;
  c.assumptions = cq.tags();
  c.method = "lp";

  LinearCone cone = linearization_cone(prob, x, act);
  ConeSummary cs;
  cs.rows = cone.rows();
  cs.trivial = false;
  c.cone = cs;

  const int n = prob.n;
  Vec grad = prob.objectives[0].gradient(x);
  LpProblem lp = LpProblem::make(n);
  lp.c = grad;
  lp.lb.setConstant(-1.0);
  lp.ub.setConstant(1.0);
  add_cone_rows(lp, cone);
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::kOptimal) {
    c.status = CertStatus::kInconclusive;
    c.detail = "direction LP did not solve";
    return c;
  }
  if (res.objective >= -kFonTol) {
    c.status = CertStatus::kProved;
    c.detail = "no first-order descent direction in the linearization cone";
  } else {
    Vec v = res.x;
    c.status = CertStatus::kFailWitness;
    c.witness = Witness{v, grad.dot(v)};
    downgrade_without_evidence(c, cq);
  }
  // Unconditionally sound when proved: the linearization cone contains the
  // tangent cone, so nonnegativity transfers.
  (void)opts;
  return c;
}

Certificate second_order_necessary(const Problem& prob, const Vec& x,
                                   const ActiveSet& act,
                                   const MultiplierVector& mult,
                                   const CqEvidence& cq,
                                   const CertifyOptions& opts) {
  return second_order_check(ConditionId::kSon, prob, x, act, mult, &cq, opts);
}

Certificate second_order_necessary_isolated(const Problem& prob, const Vec& x,
                                            const ActiveSet& act,
                                            const MultiplierVector& mult,
                                            const CqEvidence& cq,
                                            const CertifyOptions& opts) {
  return second_order_check(ConditionId::kSonIsolated, prob, x, act, mult,
                            &cq, opts);
}

Certificate second_order_sufficient(const Problem& prob, const Vec& x,
                                    const ActiveSet& act,
                                    const MultiplierVector& mult,
                                    const CertifyOptions& opts) {
  return second_order_check(ConditionId::kSos, prob, x, act, mult, nullptr,
                            opts);
}

Certificate mop_first_order(const Problem& prob, const Vec& x,
                            const ActiveSet& act, const CqEvidence& cq,
                            const CertifyOptions& opts) {
  Certificate c;
  c.id = ConditionId::kMopFon;
  c.assumptions = cq.tags();

  MultiplierSearch ms = find_mop_multipliers(prob, x, act);
  if (ms.mult) {
    c.status = CertStatus::kProved;
    c.method = "multiplier";
    c.detail = "nonnegative objective weights with stationarity exist";
    return c;
  }

  // The alternative certificate is a direction descending for every
  // objective inside the linearization cone.
  const int n = prob.n;
  Vec u = ms.farkas.size() >= n ? Vec(ms.farkas.head(n)) : Vec(Vec::Zero(n));
  LinearCone cone = linearization_cone(prob, x, act);
  bool valid = u.norm() > 1e-12 && cone.contains(u, 1e-7 * std::max(1.0, u.norm()));
  Vec v;
  double worst = 0.0;
  if (valid) {
    v = u.normalized();
    worst = -kInf;
    for (const auto& phi : prob.objectives)
      worst = std::max(worst, phi.gradient(x).dot(v));
    valid = worst < 0.0;
  }
  if (valid) {
    c.status = CertStatus::kFailWitness;
    c.method = "farkas";
    c.witness = Witness{v, worst};
    downgrade_without_evidence(c, cq);
  } else {
    c.status = CertStatus::kInconclusive;
    c.method = "farkas";
    c.detail = "stationarity multipliers absent but no simultaneous descent "
               "direction could be validated";
  }
  (void)opts;
  return c;
}

Certificate mop_second_order_sufficient(const Problem& prob, const Vec& x,
                                        const ActiveSet& act,
                                        const MultiplierVector& mult,
                                        const CertifyOptions& opts) {
  require_valid_multipliers(prob, x, mult, opts.tol);

  Certificate c;
  c.id = ConditionId::kMopSos;
  c.method = "components";

  PiecewiseFn lf = lagrangian(prob, mult);
  HessianBundle bd = bundle(lf, x, opts.tol.cell);
  c.bundle = bd.matrices;

  CriticalUnion ku = mop_critical_union(prob, x, act);
  bool all_vacuous = true;
  bool any_sampled = false;
  bool any_inconclusive = false;
  const ComponentResult* first_fail = nullptr;
  double worst_modulus = kInf;

  for (const auto& comp : ku.components) {
    ComponentResult r;
    r.objective = comp.objective;
    ConeSummary cs = summarize(comp.cone);
    r.cone = cs;
    if (cs.trivial) {
      r.status = CertStatus::kProved;
      r.vacuous = true;
      r.method = "vacuous";
      c.components.push_back(std::move(r));
      continue;
    }
    all_vacuous = false;
    Scan scan = scan_directions(bd, comp.cone, cs, false, opts);
    if (!scan.exact && !scan.sampled) {
      r.status = CertStatus::kInconclusive;
      any_inconclusive = true;
      c.components.push_back(std::move(r));
      continue;
    }
    r.method = scan.method;
    if (scan.sampled) any_sampled = true;
    double q = bd.qmin(scan.argmin);
    const double tq = opts.tol.q;
    if (scan.value > tq) {
      r.status = scan.exact ? CertStatus::kProved : CertStatus::kPassSampled;
      r.modulus = scan.value;
      worst_modulus = std::min(worst_modulus, scan.value);
    } else if (scan.value < -tq) {
      r.status = CertStatus::kFailWitness;
      r.witness = Witness{scan.argmin, q};
    } else {
      r.status = CertStatus::kInconclusive;
      r.witness = Witness{scan.argmin, q};
      any_inconclusive = true;
    }
    c.components.push_back(std::move(r));
  }

  for (const auto& r : c.components)
    if (r.status == CertStatus::kFailWitness) {
      first_fail = &r;
      break;
    }

  if (any_sampled) {
    c.samples = opts.samples;
    c.seed = opts.seed;
  }

  if (first_fail) {
    c.status = CertStatus::kFailWitness;
    c.witness = first_fail->witness;
    c.detail = "component for objective " +
               std::to_string(first_fail->objective) + " fails";
  } else if (any_inconclusive) {
    c.status = CertStatus::kInconclusive;
    c.detail = "at least one component lies inside the decision band";
  } else if (all_vacuous) {
    c.status = CertStatus::kProved;
    c.vacuous = true;
    c.detail = "every component cone is trivial";
  } else {
    bool all_exact = true;
    for (const auto& r : c.components)
      if (!r.vacuous && r.status != CertStatus::kProved) all_exact = false;
    c.status = all_exact ? CertStatus::kProved : CertStatus::kPassSampled;
    if (worst_modulus < kInf) c.modulus = worst_modulus;
  }
  return c;
}

namespace {

void validate_user_multipliers(const Problem& prob, const Vec& x,
                               const ActiveSet& act,
                               const UserMultipliers& user,
                               const Tolerances& tol, MultiplierReport& mr) {
  const int q = static_cast<int>(prob.objectives.size());
  const int m = static_cast<int>(prob.inequalities.size());
  const int p = static_cast<int>(prob.equalities.size());
  MultiplierVector cand;
  cand.alpha = user.alpha.size() ? user.alpha : Vec::Ones(1);
  cand.lambda = user.lambda.size() ? user.lambda : Vec::Zero(m);
  cand.mu = user.mu.size() ? user.mu : Vec::Zero(p);

  if (cand.alpha.size() != q || cand.lambda.size() != m ||
      cand.mu.size() != p) {
    mr.issues.push_back("multiplier block sizes do not match the problem");
    return;
  }
  for (int l = 0; l < q; ++l)
    if (cand.alpha[l] < -tol.mult) {
      mr.issues.push_back("objective weight alpha[" + std::to_string(l) +
                          "] is negative");
      return;
    }
  double asum = cand.alpha.sum();
  if (asum <= tol.mult) {
    mr.issues.push_back("objective weights sum to zero");
    return;
  }
  cand.alpha = (cand.alpha / asum).cwiseMax(0.0);
  cand.lambda /= asum;
  cand.mu /= asum;

  for (int i = 0; i < m; ++i) {
    if (cand.lambda[i] < -tol.mult) {
      mr.issues.push_back("inequality multiplier lambda[" + std::to_string(i) +
                          "] is negative");
      return;
    }
    if (cand.lambda[i] > tol.mult && !act.contains(i)) {
      mr.issues.push_back("lambda[" + std::to_string(i) +
                          "] is positive on an inactive constraint");
      return;
    }
    cand.lambda[i] = std::max(cand.lambda[i], 0.0);
  }

  KKTResidual res = kkt_residual(prob, x, cand);
  if (res.stationarity_norm > kResidualTol) {
    mr.issues.push_back("stationarity residual " +
                        format_number(res.stationarity_norm) + " exceeds " +
                        format_number(kResidualTol));
    return;
  }
  if (res.complementarity_norm > tol.act) {
    mr.issues.push_back("complementarity residual " +
                        format_number(res.complementarity_norm) +
                        " exceeds " + format_number(tol.act));
    return;
  }
  mr.mult = std::move(cand);
  mr.source = "user";
}

}  // namespace

PointReport certify_point(const Problem& prob, const Vec& x,
                          const CertifyOptions& opts) {
  PointReport rep;
  rep.x = x;
  rep.violations = feasibility_violations(prob, x, opts.tol.feas);
  rep.feasible = rep.violations.empty();
  rep.multipliers.source = "none";
  if (!rep.feasible) return rep;

  rep.active = active_set(prob, x, opts.tol);
  rep.cq.mscq_asserted = prob.mscq_asserted;
  rep.cq.licq = check_licq(prob, x, rep.active);
  rep.cq.mfcq = check_mfcq(prob, x, rep.active);

  MultiplierReport& mr = rep.multipliers;
  if (prob.multipliers)
    validate_user_multipliers(prob, x, rep.active, *prob.multipliers,
                              opts.tol, mr);
  if (!mr.mult) {
    // A rejected user candidate falls back to the solver; the issues stay
    // on record.
    MultiplierSearch ms = prob.scalar()
                              ? find_multipliers(prob, x, rep.active)
                              : find_mop_multipliers(prob, x, rep.active);
    if (ms.mult) {
      mr.mult = ms.mult;
      mr.source = "solved";
    } else {
      mr.farkas = ms.farkas;
      mr.source = "none";
    }
  }
  if (mr.mult) mr.residual = kkt_residual(prob, x, *mr.mult);
  mr.vertices = enumerate_multiplier_vertices(prob, x, rep.active);

  if (prob.scalar()) {
    rep.certificates.push_back(
        first_order_necessary(prob, x, rep.active, rep.cq, opts));
    if (mr.mult) {
      rep.certificates.push_back(
          second_order_necessary(prob, x, rep.active, *mr.mult, rep.cq, opts));
      rep.certificates.push_back(second_order_necessary_isolated(
          prob, x, rep.active, *mr.mult, rep.cq, opts));
      rep.certificates.push_back(
          second_order_sufficient(prob, x, rep.active, *mr.mult, opts));
    }
  } else {
    rep.certificates.push_back(
        mop_first_order(prob, x, rep.active, rep.cq, opts));
    if (mr.mult)
      rep.certificates.push_back(mop_second_order_sufficient(
          prob, x, rep.active, *mr.mult, opts));
  }
  return rep;
}

namespace {

using ojson = nlohmann::ordered_json;

double sig(double x) { return round_sig(x, 12); }

ojson vec_json(const Vec& v, bool rounded = true) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(rounded ? sig(v[i]) : v[i]);
  return a;
}

ojson mat_json(const Mat& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(sig(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void put_finite(ojson& j, const char* key, double x) {
  if (std::isfinite(x)) j[key] = sig(x);
}

ojson cone_json(const ConeSummary& s) {
  ojson j;
  ojson rows = ojson::array();
  for (const auto& r : s.rows) {
    ojson row;
    row["a"] = vec_json(r.a);
    row["rel"] = r.rel == Relation::kLeq ? "<=0" : "==0";
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["trivial"] = s.trivial;
  if (s.basis_computed) {
    ojson rays = ojson::array();
    for (const Vec& r : s.basis.rays) rays.push_back(vec_json(r));
    j["rays"] = std::move(rays);
    ojson lin = ojson::array();
    for (const Vec& l : s.basis.lineality) lin.push_back(vec_json(l));
    j["lineality"] = std::move(lin);
  } else if (!s.note.empty()) {
    j["note"] = s.note;
  }
  return j;
}

ojson witness_json(const Witness& w) {
  ojson j;
  j["v"] = vec_json(w.v);
  j["q"] = sig(w.q);
  return j;
}

ojson component_json(const ComponentResult& r) {
  ojson j;
  j["objective"] = r.objective;
  j["status"] = to_string(r.status);
  j["vacuous"] = r.vacuous;
  if (!r.method.empty()) j["method"] = r.method;
  j["cone"] = cone_json(r.cone);
  if (r.modulus) j["modulus"] = sig(*r.modulus);
  if (r.witness) j["witness"] = witness_json(*r.witness);
  return j;
}

ojson cert_json(const Certificate& c) {
  ojson j;
  j["id"] = to_string(c.id);
  j["status"] = to_string(c.status);
  j["vacuous"] = c.vacuous;
  j["assumptions"] = c.assumptions;
  if (!c.method.empty()) j["method"] = c.method;
  if (c.cone) j["cone"] = cone_json(*c.cone);
  if (!c.bundle.empty()) {
    ojson b = ojson::array();
    for (const Mat& h : c.bundle) b.push_back(mat_json(h));
    j["bundle"] = std::move(b);
  }
  if (c.modulus) j["modulus"] = sig(*c.modulus);
  if (c.witness) j["witness"] = witness_json(*c.witness);
  if (c.samples) j["samples"] = *c.samples;
  if (c.seed) j["seed"] = *c.seed;
  if (!c.components.empty()) {
    ojson comps = ojson::array();
    for (const auto& r : c.components) comps.push_back(component_json(r));
    j["components"] = std::move(comps);
  }
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

ojson report_json(const PointReport& rep, const CertifyOptions& opts) {
  ojson j;
  j["point"] = vec_json(rep.x, false);
  j["feasible"] = rep.feasible;
  j["violations"] = rep.violations;
  j["active_set"] = rep.active.indices;

  ojson cq;
  cq["mscq_asserted"] = rep.cq.mscq_asserted;
  ojson licq;
  licq["holds"] = rep.cq.licq.holds;
  put_finite(licq, "min_singular_value", rep.cq.licq.min_singular_value);
  cq["licq"] = std::move(licq);
  ojson mfcq;
  mfcq["holds"] = rep.cq.mfcq.holds;
  mfcq["equalities_independent"] = rep.cq.mfcq.equalities_independent;
  put_finite(mfcq, "margin", rep.cq.mfcq.margin);
  cq["mfcq"] = std::move(mfcq);
  j["cq"] = std::move(cq);

  ojson mult;
  mult["source"] = rep.multipliers.source;
  mult["found"] = rep.multipliers.mult.has_value();
  if (rep.multipliers.mult) {
    mult["alpha"] = vec_json(rep.multipliers.mult->alpha);
    mult["lambda"] = vec_json(rep.multipliers.mult->lambda);
    mult["mu"] = vec_json(rep.multipliers.mult->mu);
    ojson res;
    res["stationarity"] = sig(rep.multipliers.residual.stationarity_norm);
    res["complementarity"] =
        sig(rep.multipliers.residual.complementarity_norm);
    mult["residual"] = std::move(res);
  }
  if (rep.multipliers.farkas.size() > 0)
    mult["farkas"] = vec_json(rep.multipliers.farkas);
  ojson venum;
  venum["ran"] = rep.multipliers.vertices.ran;
  if (!rep.multipliers.vertices.note.empty())
    venum["note"] = rep.multipliers.vertices.note;
  if (rep.multipliers.vertices.ran) {
    venum["bounded"] = rep.multipliers.vertices.bounded;
    venum["count"] = rep.multipliers.vertices.count;
    venum["unique"] = rep.multipliers.vertices.bounded &&
                      rep.multipliers.vertices.count == 1;
  }
  mult["vertex_enumeration"] = std::move(venum);
  if (!rep.multipliers.issues.empty())
    mult["issues"] = rep.multipliers.issues;
  j["multipliers"] = std::move(mult);

  ojson certs = ojson::array();
  for (const auto& c : rep.certificates) certs.push_back(cert_json(c));
  j["certificates"] = std::move(certs);

  ojson params;
  params["samples"] = opts.samples;
  params["seed"] = opts.seed;
  ojson tols;
  tols["c0"] = opts.tol.c0;
  tols["c1"] = opts.tol.c1;
  tols["cell"] = opts.tol.cell;
  tols["act"] = opts.tol.act;
  tols["feas"] = opts.tol.feas;
  tols["mult"] = opts.tol.mult;
  tols["q"] = opts.tol.q;
  params["tolerances"] = std::move(tols);
  j["parameters"] = std::move(params);
  return j;
}

std::string fmt_vec(const Vec& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  return s + "]";
}

}  // namespace

std::string render_json(const PointReport& rep, const CertifyOptions& opts) {
  return report_json(rep, opts).dump(2) + "\n";
}

std::string render_text(const PointReport& rep, const CertifyOptions& opts) {
  std::ostringstream out;
  out << "point       " << fmt_vec(rep.x) << "\n";
  out << "feasible    " << (rep.feasible ? "yes" : "no") << "\n";
  if (!rep.feasible) {
    for (const auto& v : rep.violations) out << "  violation: " << v << "\n";
    return out.str();
  }
  out << "active set  [";
  for (std::size_t i = 0; i < rep.active.indices.size(); ++i) {
    if (i) out << ", ";
    out << rep.active.indices[i];
  }
  out << "]\n";
  out << "cq          mscq_asserted=" << (rep.cq.mscq_asserted ? "yes" : "no")
      << " licq=" << (rep.cq.licq.holds ? "yes" : "no")
      << " mfcq=" << (rep.cq.mfcq.holds ? "yes" : "no") << "\n";
  out << "multipliers source=" << rep.multipliers.source;
  if (rep.multipliers.mult) {
    out << " alpha=" << fmt_vec(rep.multipliers.mult->alpha)
        << " lambda=" << fmt_vec(rep.multipliers.mult->lambda)
        << " mu=" << fmt_vec(rep.multipliers.mult->mu) << "\n";
    out << "  residual  stationarity="
        << format_number(rep.multipliers.residual.stationarity_norm)
        << " complementarity="
        << format_number(rep.multipliers.residual.complementarity_norm)
        << "\n";
  } else {
    out << " (none found)\n";
    if (rep.multipliers.farkas.size() > 0)
      out << "  farkas direction " << fmt_vec(rep.multipliers.farkas) << "\n";
  }
  if (rep.multipliers.vertices.ran) {
    out << "  vertices  count=" << rep.multipliers.vertices.count
        << (rep.multipliers.vertices.bounded ? " (bounded)" : " (unbounded)")
        << "\n";
  } else if (!rep.multipliers.vertices.note.empty()) {
    out << "  vertices  skipped: " << rep.multipliers.vertices.note << "\n";
  }
  for (const auto& iss : rep.multipliers.issues)
    out << "  user multipliers rejected: " << iss << "\n";

  for (const auto& c : rep.certificates) {
    out << to_string(c.id);
    for (std::size_t k = to_string(c.id).size(); k < 13; ++k) out << ' ';
    out << to_string(c.status);
    if (c.vacuous) out << " (vacuous)";
    if (c.modulus) out << "  modulus=" << format_number(*c.modulus);
    if (c.witness)
      out << "  witness v=" << fmt_vec(c.witness->v)
          << " q=" << format_number(c.witness->q);
    if (c.samples) out << "  samples=" << *c.samples << " seed=" << *c.seed;
    if (!c.assumptions.empty()) {
      out << "  [";
      for (std::size_t i = 0; i < c.assumptions.size(); ++i) {
        if (i) out << ", ";
        out << c.assumptions[i];
      }
      out << "]";
    }
    out << "\n";
    if (!c.detail.empty()) out << "  " << c.detail << "\n";
    for (const auto& r : c.components) {
      out << "  objective " << r.objective << ": " << to_string(r.status);
      if (r.vacuous) out << " (vacuous)";
      if (r.modulus) out << " modulus=" << format_number(*r.modulus);
      if (r.witness)
        out << " witness v=" << fmt_vec(r.witness->v)
            << " q=" << format_number(r.witness->q);
      out << "\n";
    }
  }
  out << "parameters  samples=" << opts.samples << " seed=" << opts.seed
      << " tol_q=" << format_number(opts.tol.q) << "\n";
  return out.str();
}

}  // namespace optcert
