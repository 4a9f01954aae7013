#include "oracles.hpp"
#include "optcert/linprog.hpp"

#include <doctest.h>

using namespace optcert;
using namespace optcert::testing;

TEST_CASE("bounded LP with one inequality") {
  // min -x - y  s.t.  x + y <= 1,  0 <= x, y <= 1
  LpProblem p = LpProblem::make(2);
  p.c << -1.0, -1.0;
  p.a_ub.resize(1, 2);
  p.a_ub << 1.0, 1.0;
  p.b_ub.resize(1);
  p.b_ub << 1.0;
  p.lb.setZero();
  p.ub.setOnes();
  LpResult res = solve_lp(p);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(res.x[0] + res.x[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("equality constraint with a free variable") {
  // min x  s.t.  x + y == 3, y <= 1, x free
  LpProblem p = LpProblem::make(2);
  p.c << 1.0, 0.0;
  p.a_eq.resize(1, 2);
  p.a_eq << 1.0, 1.0;
  p.b_eq.resize(1);
  p.b_eq << 3.0;
  p.ub[1] = 1.0;
  LpResult res = solve_lp(p);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("infeasible and unbounded LPs are classified") {
  LpProblem p = LpProblem::make(1);
  p.c << 1.0;
  p.a_ub.resize(1, 1);
  p.a_ub << 1.0;
  p.b_ub.resize(1);
  p.b_ub << -1.0;  // x <= -1
  p.lb << 0.0;
  CHECK(solve_lp(p).status == LpStatus::kInfeasible);

  LpProblem u = LpProblem::make(1);
  u.c << -1.0;  // min -x, x unbounded above
  CHECK(solve_lp(u).status == LpStatus::kUnbounded);

  LpProblem d = LpProblem::make(1);
  d.c << 1.0;  // min x with x free below
  CHECK(solve_lp(d).status == LpStatus::kUnbounded);
}

TEST_CASE("degenerate rows terminate at the optimum") {
  // Duplicate active constraints at the solution.
  LpProblem p = LpProblem::make(2);
  p.c << -1.0, 0.0;
  p.a_ub.resize(3, 2);
  p.a_ub << 1.0, 0.0, 1.0, 0.0, 1.0, 1.0;
  p.b_ub.resize(3);
  p.b_ub << 0.5, 0.5, 0.5;
  p.lb.setZero();
  p.ub.setOnes();
  LpResult res = solve_lp(p);
  REQUIRE(res.status == LpStatus::kOptimal);
  CHECK(res.objective == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(res.x[1] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("solver output is deterministic") {
  LpProblem p = LpProblem::make(3);
  p.c << -1.0, 2.0, -0.5;
  p.a_ub.resize(2, 3);
  p.a_ub << 1.0, 1.0, 1.0, -1.0, 2.0, 0.5;
  p.b_ub.resize(2);
  p.b_ub << 2.0, 1.0;
  p.lb = Vec::Constant(3, -1.0);
  p.ub = Vec::Constant(3, 1.0);
  LpResult a = solve_lp(p);
  LpResult b = solve_lp(p);
  REQUIRE(a.status == LpStatus::kOptimal);
  REQUIRE(b.status == LpStatus::kOptimal);
  CHECK(a.objective == b.objective);
  CHECK((a.x - b.x).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("random LPs: solution beats sampled feasible points") {
  Rng rng(404);
  int solved = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.index(3));
    const int m = 1 + static_cast<int>(rng.index(4));
    LpProblem p = LpProblem::make(n);
    for (int i = 0; i < n; ++i) p.c[i] = rng.uniform(-1.0, 1.0);
    p.a_ub.resize(m, n);
    p.b_ub.resize(m);
    for (int r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) p.a_ub(r, j) = rng.uniform(-1.0, 1.0);
      p.b_ub[r] = rng.uniform(0.1, 1.0);  // origin stays feasible
    }
    p.lb = Vec::Constant(n, -1.0);
    p.ub = Vec::Constant(n, 1.0);
    LpResult res = solve_lp(p);
    REQUIRE(res.status == LpStatus::kOptimal);
    ++solved;

    // Feasibility of the reported solution.
    CHECK(((p.a_ub * res.x - p.b_ub).array() <= 1e-8).all());
    CHECK((res.x.array() >= p.lb.array() - 1e-8).all());
    CHECK((res.x.array() <= p.ub.array() + 1e-8).all());
    CHECK(res.objective == doctest::Approx(p.c.dot(res.x)).epsilon(1e-9));

    // No sampled feasible point does better.
    for (int s = 0; s < 200; ++s) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
      if (((p.a_ub * x - p.b_ub).array() <= 0.0).all())
        CHECK(p.c.dot(x) >= res.objective - 1e-8);
    }
  }
  CHECK(solved == 30);
}

TEST_CASE("sign-constrained feasibility: explicit cases") {
  Mat a(2, 2);
  a << 1.0, 0.0, 0.0, 1.0;
  Vec b(2);
  b << 1.0, 2.0;
  FarkasResult ok = solve_eq_sign(a, b, {true, true});
  REQUIRE(ok.feasible);
  CHECK((a * ok.x - b).lpNorm<Eigen::Infinity>() <= 1e-9);
  CHECK(ok.x.minCoeff() >= -1e-9);

  b << -1.0, 2.0;
  FarkasResult bad = solve_eq_sign(a, b, {true, true});
  REQUIRE_FALSE(bad.feasible);
  // y certifies: y'a_j <= 0 on sign-constrained columns, y'b > 0.
  CHECK((bad.y.transpose() * a).maxCoeff() <= 1e-9);
  CHECK(bad.y.dot(b) > 0.0);

  // Same right-hand side becomes feasible once the column is free.
  FarkasResult freed = solve_eq_sign(a, b, {false, true});
  REQUIRE(freed.feasible);
  CHECK((a * freed.x - b).lpNorm<Eigen::Infinity>() <= 1e-9);
}

TEST_CASE("sign-constrained feasibility: certificate soundness on random systems") {
  Rng rng(2024);
  int feasible = 0, refuted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng.index(3));
    const int cols = 1 + static_cast<int>(rng.index(5));
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    Vec b(rows);
    for (int i = 0; i < rows; ++i) b[i] = rng.uniform(-1.0, 1.0);
    std::vector<bool> nonneg(cols);
    for (int j = 0; j < cols; ++j) nonneg[j] = rng.uniform() < 0.7;

    FarkasResult res = solve_eq_sign(a, b, nonneg);
    if (res.feasible) {
      ++feasible;
      REQUIRE(res.x.size() == cols);
      CHECK((a * res.x - b).lpNorm<Eigen::Infinity>() <= 1e-7);
      for (int j = 0; j < cols; ++j)
        if (nonneg[j]) CHECK(res.x[j] >= -1e-9);
    } else {
      ++refuted;
      REQUIRE(res.y.size() == rows);
      const Vec ya = a.transpose() * res.y;
      for (int j = 0; j < cols; ++j) {
        if (nonneg[j])
          CHECK(ya[j] <= 1e-9);
        else
          CHECK(std::abs(ya[j]) <= 1e-9);
      }
      CHECK(res.y.dot(b) > 1e-12);
    }
  }
  // Both branches must actually be exercised.
  CHECK(feasible > 20);
  CHECK(refuted > 20);
}

TEST_CASE("zero-column system") {
  Mat a(2, 0);
  Vec b = Vec::Zero(2);
  FarkasResult res = solve_eq_sign(a, b, {});
  CHECK(res.feasible);
  b << 1.0, 0.0;
  FarkasResult bad = solve_eq_sign(a, b, {});
  CHECK_FALSE(bad.feasible);
  CHECK(bad.y.dot(b) > 0.0);
}
