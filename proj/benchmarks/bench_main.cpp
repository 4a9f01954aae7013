#include "optcert/bundle.hpp"
#include "optcert/certify.hpp"
#include "optcert/cone.hpp"
#include "optcert/linprog.hpp"
#include "optcert/problem_io.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

using namespace optcert;

// x1 <= 0 and x1 >= 0 halves of -t|t|/2 plus a smooth quadratic tail.
Problem kink_problem() {
  const int n = 2;
  Polynomial neg(n, {{0.5, {2, 0}}, {1.0, {0, 2}}});
  Polynomial pos(n, {{-0.5, {2, 0}}, {1.0, {0, 2}}});
  Vec e1 = Vec::Zero(n);
  e1[0] = 1.0;
  Cell left{{Halfspace{e1, 0.0}}};
  Cell right{{Halfspace{-e1, 0.0}}};
  PiecewiseFn f(n, {{left, neg}, {right, pos}});

  Polynomial g1(n, {{-1.0, {1, 0}}});
  Polynomial g2(n, {{-1.0, {0, 1}}});
  Polynomial h(n, {{1.0, {1, 0}}, {1.0, {0, 1}}, {-1.0, {0, 0}}});

  Problem prob;
  prob.n = n;
  prob.objectives = {f};
  prob.inequalities = {PiecewiseFn(g1), PiecewiseFn(g2)};
  prob.equalities = {PiecewiseFn(h)};
  prob.box = Box::centered(n, 10.0);
  prob.mscq_asserted = true;
  return prob;
}

void bm_bundle(benchmark::State& state) {
  Problem prob = kink_problem();
  MultiplierVector mult;
  mult.alpha = Vec::Ones(1);
  mult.lambda = Vec::Zero(2);
  mult.lambda[1] = 1.0;
  mult.mu = Vec::Ones(1);
  Vec x(2);
  x << 1.0, 0.0;
  for (auto _ : state) {
    PiecewiseFn lf = lagrangian(prob, mult);
    benchmark::DoNotOptimize(bundle(lf, x, 1e-10));
  }
}
BENCHMARK(bm_bundle);

void bm_qmin(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  HessianBundle bd;
  for (int k = 0; k < 4; ++k) {
    Mat h = Mat::Identity(n, n) * (1.0 + k);
    h(0, n - 1) = h(n - 1, 0) = 0.25 * k;
    bd.matrices.push_back(h);
    bd.source_cells.push_back(k);
  }
  Vec v = Vec::LinSpaced(n, -1.0, 1.0).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(bd.qmin(v));
}
BENCHMARK(bm_qmin)->Arg(2)->Arg(4)->Arg(8);

void bm_extreme_rays(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<ConeRow> rows;
  for (int i = 0; i < n; ++i) {
    Vec a = Vec::Zero(n);
    a[i] = -1.0;
    if (i + 1 < n) a[i + 1] = 0.5;
    rows.push_back({a, Relation::kLeq});
  }
  LinearCone cone(n, rows);
  for (auto _ : state) benchmark::DoNotOptimize(extreme_rays(cone));
}
BENCHMARK(bm_extreme_rays)->Arg(3)->Arg(5)->Arg(7);

void bm_simplex(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  LpProblem lp = LpProblem::make(n);
  lp.lb.setConstant(-1.0);
  lp.ub.setConstant(1.0);
  lp.c = Vec::LinSpaced(n, -1.0, 1.0);
  lp.a_ub = Mat::Ones(1, n);
  lp.b_ub = Vec::Ones(1);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp));
}
BENCHMARK(bm_simplex)->Arg(4)->Arg(8)->Arg(16);

void bm_certify_point(benchmark::State& state) {
  Problem prob = kink_problem();
  Vec x(2);
  x << 1.0, 0.0;
  CertifyOptions opts;
  opts.samples = 512;
  for (auto _ : state)
    benchmark::DoNotOptimize(certify_point(prob, x, opts));
}
BENCHMARK(bm_certify_point);

}  // namespace

BENCHMARK_MAIN();
