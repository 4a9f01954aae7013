#include "oracles.hpp"
#include "optcert/multipliers.hpp"

#include <doctest.h>

using namespace optcert;
using namespace optcert::testing;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

}  // namespace

TEST_CASE("feasibility violations and the active set") {
  Problem prob = example_integral_kink();
  Tolerances tol;

  CHECK(feasibility_violations(prob, vec2(1.0, 0.0), tol.feas).empty());
  CHECK(feasibility_violations(prob, vec2(0.5, 0.5), tol.feas).empty());

  const auto bad = feasibility_violations(prob, vec2(-1.0, 0.0), tol.feas);
  CHECK(bad.size() == 2);  // g_0 > 0 and h != 0

  const auto outside =
      feasibility_violations(prob, vec2(100.0, 0.0), tol.feas);
  REQUIRE(outside.size() == 1);
  CHECK(outside[0].find("box") != std::string::npos);

  ActiveSet act = active_set(prob, vec2(1.0, 0.0), tol);
  CHECK(act.indices == std::vector<int>{1});
  CHECK(act.contains(1));
  CHECK_FALSE(act.contains(0));

  act = active_set(prob, vec2(0.5, 0.5), tol);
  CHECK(act.indices.empty());

  CHECK_THROWS_AS(active_set(prob, vec2(-1.0, 0.0), tol), InfeasibleError);

  // Near-active within tol.act counts as active.
  act = active_set(prob, vec2(1.0 - 0.5e-8, 0.5e-8), tol);
  CHECK(act.indices == std::vector<int>{1});
}

TEST_CASE("multipliers of the kinked integral problem at (1,0)") {
  Problem prob = example_integral_kink();
  Tolerances tol;
  const Vec x = vec2(1.0, 0.0);
  ActiveSet act = active_set(prob, x, tol);

  MultiplierSearch ms = find_multipliers(prob, x, act);
  REQUIRE(ms.mult.has_value());
  CHECK(ms.mult->lambda.size() == 2);
  CHECK(std::abs(ms.mult->lambda[0]) <= 1e-9);
  CHECK(std::abs(ms.mult->lambda[1] - 1.0) <= 1e-9);
  REQUIRE(ms.mult->mu.size() == 1);
  CHECK(std::abs(ms.mult->mu[0] - 1.0) <= 1e-9);

  KKTResidual res = kkt_residual(prob, x, *ms.mult);
  CHECK(res.stationarity_norm <= 1e-9);
  CHECK(res.complementarity_norm <= 1e-9);
}

TEST_CASE("multipliers of the corner quadratic at the origin") {
  Problem prob = example_corner_quadratic();
  Tolerances tol;
  const Vec x = vec2(0.0, 0.0);
  ActiveSet act = active_set(prob, x, tol);
  CHECK(act.indices == std::vector<int>{0, 1});

  MultiplierSearch ms = find_multipliers(prob, x, act);
  REQUIRE(ms.mult.has_value());
  CHECK(std::abs(ms.mult->lambda[0] - 1.0) <= 1e-9);
  CHECK(std::abs(ms.mult->lambda[1]) <= 1e-9);
  CHECK(kkt_residual(prob, x, *ms.mult).stationarity_norm <= 1e-9);
}

TEST_CASE("no multipliers at a non-stationary point yields a descent certificate") {
  // f(x) = x, unconstrained: no multiplier can cancel the gradient.
  Problem prob = wrap_unconstrained(PiecewiseFn(Polynomial(1, {{1.0, {1}}})));
  Tolerances tol;
  const Vec x = vec1(0.0);
  ActiveSet act = active_set(prob, x, tol);
  MultiplierSearch ms = find_multipliers(prob, x, act);
  CHECK_FALSE(ms.mult.has_value());
  REQUIRE(ms.farkas.size() == 1);
  CHECK(ms.farkas.dot(prob.objectives[0].gradient(x)) < 0.0);
}

TEST_CASE("farkas direction respects active constraints") {
  // f = x2 decreases along -e2, but g = -x2 <= 0 is active at the origin:
  // any linearized descent direction must keep grad g . y <= 0.
  Problem prob;
  prob.n = 2;
  prob.objectives = {PiecewiseFn(Polynomial(2, {{1.0, {0, 1}}}))};
  prob.inequalities = {PiecewiseFn(Polynomial(2, {{1.0, {1, 0}}}))};  // x1 <= 0
  prob.box = Box::centered(2, 10.0);
  Tolerances tol;
  const Vec x = vec2(0.0, 0.0);
  ActiveSet act = active_set(prob, x, tol);
  REQUIRE(act.indices == std::vector<int>{0});
  MultiplierSearch ms = find_multipliers(prob, x, act);
  REQUIRE_FALSE(ms.mult.has_value());
  const Vec y = ms.farkas;
  CHECK(y.dot(prob.objectives[0].gradient(x)) < 0.0);
  CHECK(y.dot(prob.inequalities[0].gradient(x)) <= 1e-9);
}

TEST_CASE("weighted multipliers for the biobjective example") {
  Problem prob = example_biobjective_kink();
  Tolerances tol;
  const Vec x = vec1(0.0);
  ActiveSet act = active_set(prob, x, tol);
  CHECK(act.indices == std::vector<int>{0});

  MultiplierSearch ms = find_mop_multipliers(prob, x, act);
  REQUIRE(ms.mult.has_value());
  CHECK(ms.mult->alpha.size() == 2);
  CHECK(ms.mult->alpha.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ms.mult->alpha.minCoeff() >= -1e-12);
  CHECK(std::abs(ms.mult->lambda[0]) <= 1e-9);
  CHECK(kkt_residual(prob, x, *ms.mult).stationarity_norm <= 1e-9);
}

TEST_CASE("weighted search refutes non-stationary multiobjective points") {
  // Both objectives strictly decrease along -1: no weights work.
  Problem prob;
  prob.n = 1;
  prob.objectives = {PiecewiseFn(Polynomial(1, {{1.0, {1}}})),
                     PiecewiseFn(Polynomial(1, {{2.0, {1}}}))};
  prob.box = Box::centered(1, 10.0);
  Tolerances tol;
  const Vec x = vec1(0.0);
  ActiveSet act = active_set(prob, x, tol);
  MultiplierSearch ms = find_mop_multipliers(prob, x, act);
  CHECK_FALSE(ms.mult.has_value());
  REQUIRE(ms.farkas.size() == 2);  // lifted by the normalization row
  const Vec u = ms.farkas.head(1);
  CHECK(u.dot(prob.objectives[0].gradient(x)) < 0.0);
  CHECK(u.dot(prob.objectives[1].gradient(x)) < 0.0);
}

TEST_CASE("weighted search reduces to the scalar search for one objective") {
  Problem prob = example_corner_quadratic();
  Tolerances tol;
  const Vec x = vec2(0.0, 0.0);
  ActiveSet act = active_set(prob, x, tol);
  MultiplierSearch scalar = find_multipliers(prob, x, act);
  MultiplierSearch weighted = find_mop_multipliers(prob, x, act);
  REQUIRE(scalar.mult.has_value());
  REQUIRE(weighted.mult.has_value());
  CHECK(weighted.mult->alpha[0] == doctest::Approx(1.0));
  CHECK((weighted.mult->lambda - scalar.mult->lambda).norm() <= 1e-9);
}

TEST_CASE("licq holds for independent active gradients") {
  Tolerances tol;
  Problem corner = example_corner_quadratic();
  const Vec x0 = vec2(0.0, 0.0);
  LicqResult licq = check_licq(corner, x0, active_set(corner, x0, tol));
  CHECK(licq.holds);
  CHECK(licq.min_singular_value == doctest::Approx(1.0));

  Problem integral = example_integral_kink();
  const Vec x1 = vec2(1.0, 0.0);
  CHECK(check_licq(integral, x1, active_set(integral, x1, tol)).holds);

  // No active constraints at an interior point: vacuously independent.
  Problem free = wrap_unconstrained(PiecewiseFn(Polynomial(1, {{1.0, {2}}})));
  const Vec xf = vec1(0.5);
  CHECK(check_licq(free, xf, active_set(free, xf, tol)).holds);
}

TEST_CASE("licq fails for duplicated gradients") {
  Problem prob;
  prob.n = 2;
  prob.objectives = {PiecewiseFn(Polynomial(2, {{1.0, {0, 1}}}))};
  // Same halfplane twice: x1 <= 0, 2 x1 <= 0.
  prob.inequalities = {PiecewiseFn(Polynomial(2, {{1.0, {1, 0}}})),
                       PiecewiseFn(Polynomial(2, {{2.0, {1, 0}}}))};
  prob.box = Box::centered(2, 10.0);
  Tolerances tol;
  const Vec x = vec2(0.0, 0.0);
  LicqResult licq = check_licq(prob, x, active_set(prob, x, tol));
  CHECK_FALSE(licq.holds);
}

TEST_CASE("mfcq inner direction at the corner") {
  Problem prob = example_corner_quadratic();
  Tolerances tol;
  const Vec x = vec2(0.0, 0.0);
  MfcqResult mfcq = check_mfcq(prob, x, active_set(prob, x, tol));
  CHECK(mfcq.holds);
  CHECK(mfcq.margin == doctest::Approx(1.0).epsilon(1e-8));
  REQUIRE(mfcq.direction.size() == 2);
  // The reported direction strictly enters both constraints.
  for (int i : {0, 1})
    CHECK(prob.inequalities[i].gradient(x).dot(mfcq.direction) < 0.0);
}

TEST_CASE("mfcq fails for pinched inequalities") {
  // x <= 0 and -x <= 0 pinch the feasible set to {0}.
  Problem prob;
  prob.n = 1;
  prob.objectives = {PiecewiseFn(Polynomial(1, {{1.0, {2}}}))};
  prob.inequalities = {PiecewiseFn(Polynomial(1, {{1.0, {1}}})),
                       PiecewiseFn(Polynomial(1, {{-1.0, {1}}}))};
  prob.box = Box::centered(1, 10.0);
  Tolerances tol;
  const Vec x = vec1(0.0);
  MfcqResult mfcq = check_mfcq(prob, x, active_set(prob, x, tol));
  CHECK_FALSE(mfcq.holds);

  // Dependent equality gradients are reported as such.
  Problem dep;
  dep.n = 2;
  dep.objectives = {PiecewiseFn(Polynomial(2, {{1.0, {0, 2}}}))};
  dep.equalities = {
      PiecewiseFn(Polynomial(2, {{1.0, {1, 0}}})),
      PiecewiseFn(Polynomial(2, {{2.0, {1, 0}}}))};
  dep.box = Box::centered(2, 10.0);
  MfcqResult dr = check_mfcq(dep, vec2(0.0, 1.0), ActiveSet{});
  CHECK_FALSE(dr.equalities_independent);
  CHECK_FALSE(dr.holds);
}

TEST_CASE("vertex enumeration finds the unique multiplier under licq") {
  Problem prob = example_integral_kink();
  Tolerances tol;
  const Vec x = vec2(1.0, 0.0);
  ActiveSet act = active_set(prob, x, tol);
  VertexEnumeration ve = enumerate_multiplier_vertices(prob, x, act);
  REQUIRE(ve.ran);
  CHECK(ve.bounded);
  REQUIRE(ve.count == 1);
  CHECK(std::abs(ve.vertices[0].lambda[1] - 1.0) <= 1e-9);
  CHECK(std::abs(ve.vertices[0].mu[0] - 1.0) <= 1e-9);
}

TEST_CASE("vertex enumeration lists both weight vertices for the biobjective example") {
  Problem prob = example_biobjective_kink();
  Tolerances tol;
  const Vec x = vec1(0.0);
  VertexEnumeration ve =
      enumerate_multiplier_vertices(prob, x, active_set(prob, x, tol));
  REQUIRE(ve.ran);
  CHECK(ve.bounded);
  CHECK(ve.count == 2);
  for (const auto& v : ve.vertices) {
    CHECK(v.alpha.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kkt_residual(prob, x, v).stationarity_norm <= 1e-8);
  }
}

TEST_CASE("vertex enumeration reports an unbounded multiplier set") {
  // f = x^2, constraints x <= 0 and -x <= 0: lambda_0 = lambda_1 is a ray.
  Problem prob;
  prob.n = 1;
  prob.objectives = {PiecewiseFn(Polynomial(1, {{1.0, {2}}}))};
  prob.inequalities = {PiecewiseFn(Polynomial(1, {{1.0, {1}}})),
                       PiecewiseFn(Polynomial(1, {{-1.0, {1}}}))};
  prob.box = Box::centered(1, 10.0);
  Tolerances tol;
  const Vec x = vec1(0.0);
  VertexEnumeration ve =
      enumerate_multiplier_vertices(prob, x, active_set(prob, x, tol));
  REQUIRE(ve.ran);
  CHECK_FALSE(ve.bounded);
  REQUIRE(ve.count >= 1);
  CHECK(ve.vertices[0].lambda.norm() <= 1e-9);
}

TEST_CASE("vertex enumeration abstains at scale") {
  Problem prob;
  prob.n = 2;
  prob.objectives = {PiecewiseFn(Polynomial(2, {{1.0, {0, 1}}}))};
  Rng rng(5);
  for (int i = 0; i < 11; ++i) {
    const Vec a = rng.sphere_point(2);
    prob.inequalities.push_back(PiecewiseFn(
        Polynomial(2, {{a[0], {1, 0}}, {a[1], {0, 1}}})));  // a.x <= 0
  }
  prob.box = Box::centered(2, 10.0);
  Tolerances tol;
  const Vec x = vec2(0.0, 0.0);
  ActiveSet act = active_set(prob, x, tol);
  REQUIRE(act.indices.size() == 11);
  VertexEnumeration ve = enumerate_multiplier_vertices(prob, x, act);
  CHECK_FALSE(ve.ran);
  CHECK(ve.note.find("skipped") != std::string::npos);
}

TEST_CASE("kkt residual flags wrong multipliers") {
  Problem prob = example_corner_quadratic();
  const Vec x = vec2(0.0, 0.0);
  MultiplierVector wrong;
  wrong.alpha = Vec::Ones(1);
  wrong.lambda = Vec::Zero(2);  // misses lambda_0 = 1
  wrong.mu = Vec::Zero(0);
  KKTResidual res = kkt_residual(prob, x, wrong);
  CHECK(res.stationarity_norm == doctest::Approx(1.0));

  MultiplierVector mismatched = wrong;
  mismatched.lambda = Vec::Zero(3);
  CHECK_THROWS_AS(kkt_residual(prob, x, mismatched), DimensionError);
}

TEST_CASE("complementarity residual reflects positive multipliers on inactive constraints") {
  Problem prob = example_corner_quadratic();
  const Vec x = vec2(0.5, 0.0);  // only g_1 = -x2 is active here
  MultiplierVector mv;
  mv.alpha = Vec::Ones(1);
  mv.lambda = Vec::Zero(2);
  mv.lambda[0] = 2.0;  // positive on the inactive g_0
  mv.mu = Vec::Zero(0);
  KKTResidual res = kkt_residual(prob, x, mv);
  CHECK(res.complementarity[0] == doctest::Approx(-1.0));  // 2 * (-0.5)
  CHECK(res.complementarity_norm == doctest::Approx(1.0));
}
