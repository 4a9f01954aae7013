#include "oracles.hpp"
#include "optcert/bundle.hpp"

#include <doctest.h>

#include <cmath>

using namespace optcert;
using namespace optcert::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Halfspace hs1(double a, double b) {
  Vec v(1);
  v << a;
  return {v, b};
}

PiecewiseFn neg_half_t_abs_t() {
  return PiecewiseFn(1, {{Cell{{hs1(-1.0, 0.0)}}, Polynomial(1, {{-0.5, {2}}})},
                         {Cell{{hs1(1.0, 0.0)}}, Polynomial(1, {{0.5, {2}}})}});
}

Mat mat2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("bundle at a kink carries both piece hessians") {
  PiecewiseFn f = neg_half_t_abs_t();
  HessianBundle bd = bundle(f, vec1(0.0));
  REQUIRE(bd.matrices.size() == 2);
  CHECK(bd.source_cells == std::vector<int>{0, 1});
  CHECK(bd.matrices[0](0, 0) == doctest::Approx(-1.0));
  CHECK(bd.matrices[1](0, 0) == doctest::Approx(1.0));

  const Vec v = vec1(2.0);
  CHECK(bd.qmax(v) == doctest::Approx(4.0));
  CHECK(bd.qmin(v) == doctest::Approx(-4.0));
  CHECK(bd.min_eigenvalue() == doctest::Approx(-1.0));
  const auto images = bd.apply(v);
  REQUIRE(images.size() == 2);
  CHECK(images[0][0] == doctest::Approx(-2.0));
  CHECK(images[1][0] == doctest::Approx(2.0));

  // Away from the kink only one piece is active.
  HessianBundle smooth = bundle(f, vec1(0.5));
  REQUIRE(smooth.matrices.size() == 1);
  CHECK(smooth.matrices[0](0, 0) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(
      bundle(PiecewiseFn(1, {{Cell{{hs1(1.0, 0.0)}},
                              Polynomial(1, {{1.0, {2}}})}}),
             vec1(1.0)),
      NoCellError);
}

TEST_CASE("bundle deduplicates equal hessians across cells") {
  // Two cells, same quadratic: one matrix remains.
  Polynomial sq(1, {{1.0, {2}}});
  PiecewiseFn f(1, {{Cell{{hs1(1.0, 0.0)}}, sq}, {Cell{{hs1(-1.0, 0.0)}}, sq}});
  HessianBundle bd = bundle(f, vec1(0.0));
  REQUIRE(bd.matrices.size() == 1);
  CHECK(bd.source_cells == std::vector<int>{0});
  CHECK(bd.matrices[0](0, 0) == doctest::Approx(2.0));
}

TEST_CASE("bundle is outer semicontinuous at the kink") {
  PiecewiseFn f = neg_half_t_abs_t();
  HessianBundle at_kink = bundle(f, vec1(0.0));
  for (double t : {1e-9, -1e-9, 1e-5, -1e-5}) {
    HessianBundle nearby = bundle(f, vec1(t));
    for (const Mat& h : nearby.matrices) {
      bool found = false;
      for (const Mat& g : at_kink.matrices)
        if ((g - h).norm() <= 1e-8) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("lagrangian of the kinked integral problem") {
  Problem prob = example_integral_kink();
  MultiplierVector mult;
  mult.alpha = Vec::Ones(1);
  mult.lambda = vec2(0.0, 1.0);
  mult.mu = Vec::Ones(1);

  PiecewiseFn lag = lagrangian(prob, mult);
  CHECK(lag.pieces().size() == 2);  // single-piece constraints fold in place

  // L = f - x2 + (x1 + x2 - 1) = f + x1 - 1.
  for (const Vec& x : {vec2(0.3, 0.4), vec2(-1.0, 2.0), vec2(1.0, 0.0)}) {
    const double expected = prob.objectives[0].eval(x) + x[0] - 1.0;
    CHECK(lag.eval(x) == doctest::Approx(expected).epsilon(1e-12));
  }

  HessianBundle bd = bundle(lag, vec2(0.0, 1.0));
  REQUIRE(bd.matrices.size() == 2);
  CHECK((bd.matrices[0] - mat2(1.0, 0.0, 0.0, 2.0)).norm() <= 1e-12);
  CHECK((bd.matrices[1] - mat2(-1.0, 0.0, 0.0, 2.0)).norm() <= 1e-12);

  HessianBundle at_candidate = bundle(lag, vec2(1.0, 0.0));
  REQUIRE(at_candidate.matrices.size() == 1);
  CHECK((at_candidate.matrices[0] - mat2(-1.0, 0.0, 0.0, 2.0)).norm() <=
        1e-12);
}

TEST_CASE("lagrangian keeps zero-weight kinks in the refinement") {
  Problem prob = example_biobjective_kink();
  MultiplierVector mult;
  mult.alpha = vec2(1.0, 0.0);
  mult.lambda = Vec::Zero(1);
  mult.mu = Vec::Zero(0);

  PiecewiseFn lag = lagrangian(prob, mult);
  // The second objective's kink still splits the domain...
  CHECK(lag.pieces().size() == 2);
  // ...but with weight zero both pieces carry the same hessian.
  HessianBundle bd = bundle(lag, vec1(0.0));
  REQUIRE(bd.matrices.size() == 1);
  CHECK(bd.matrices[0](0, 0) == doctest::Approx(2.0));

  // With both objectives weighted the bundle splits.
  mult.alpha = vec2(0.5, 0.5);
  HessianBundle mixed = bundle(lagrangian(prob, mult), vec1(0.0));
  REQUIRE(mixed.matrices.size() == 2);
  CHECK(mixed.qmin(vec1(1.0)) == doctest::Approx(0.5));  // 0.5*2 + 0.5*(-1)
  CHECK(mixed.qmax(vec1(1.0)) == doctest::Approx(1.5));
}

TEST_CASE("missing multiplier blocks default to weight one for a scalar objective") {
  Problem prob = example_corner_quadratic();
  MultiplierVector empty;  // alpha, lambda, mu all empty
  PiecewiseFn lag = lagrangian(prob, empty);
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const Vec x = rng.ball_point(2, 5.0);
    CHECK(lag.eval(x) ==
          doctest::Approx(prob.objectives[0].eval(x)).epsilon(1e-12));
  }
}

TEST_CASE("refinement cap raises instead of degrading") {
  // One function with more pieces than the refinement cap.
  const int pieces_count = 10001;
  const double lo = -10.0, hi = 10.0;
  const double w = (hi - lo) / pieces_count;
  std::vector<Piece> pieces;
  Polynomial sq(1, {{1.0, {2}}});
  for (int k = 0; k < pieces_count; ++k) {
    const double a = lo + k * w, b = lo + (k + 1) * w;
    pieces.push_back({Cell{{hs1(-1.0, a), hs1(1.0, -b)}}, sq});
  }
  Problem prob;
  prob.n = 1;
  prob.objectives = {PiecewiseFn(1, std::move(pieces))};
  prob.box = Box::centered(1, 10.0);
  MultiplierVector mult;
  mult.alpha = Vec::Ones(1);
  CHECK_THROWS_AS(lagrangian(prob, mult), RefinementError);
}

TEST_CASE("mean-value bound across one kink") {
  PiecewiseFn f = neg_half_t_abs_t();
  TaylorCheck tc = taylor_check(f, vec1(-1.0), vec1(1.0));
  CHECK(tc.delta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tc.lower == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(tc.upper == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tc.pass);

  // Degenerate segment: delta and the bounds all collapse to zero.
  TaylorCheck still = taylor_check(f, vec1(0.5), vec1(0.5));
  CHECK(still.delta == 0.0);
  CHECK(still.pass);
}

TEST_CASE("mean-value bound on the kinked integral objective") {
  Problem prob = example_integral_kink();
  TaylorCheck tc =
      taylor_check(prob.objectives[0], vec2(-1.0, 0.0), vec2(2.0, 1.0));
  CHECK(tc.delta == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(tc.lower == doctest::Approx(-3.5).epsilon(1e-12));
  CHECK(tc.upper == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(tc.pass);
}

TEST_CASE("mean-value bound rejects a function that is not C1") {
  // |x| smuggled in as a piecewise function: delta falls outside the
  // zero-curvature band.
  PiecewiseFn f(1, {{Cell{{hs1(1.0, 0.0)}}, Polynomial(1, {{-1.0, {1}}})},
                    {Cell{{hs1(-1.0, 0.0)}}, Polynomial(1, {{1.0, {1}}})}});
  TaylorCheck tc = taylor_check(f, vec1(-1.0), vec1(1.0));
  CHECK(tc.delta == doctest::Approx(2.0));
  CHECK(tc.lower == 0.0);
  CHECK(tc.upper == 0.0);
  CHECK_FALSE(tc.pass);
}

TEST_CASE("mean-value bound holds on random piecewise quadratics") {
  Rng rng(7001);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(3));
    const int hinges = static_cast<int>(rng.index(3));
    const bool convex = rng.uniform() < 0.5;
    QuadKink qk = random_quad_kink(n, hinges, rng, convex,
                                     /*kink_at_origin=*/false);
    PiecewiseFn f = build_quad_kink(qk);
    for (int seg = 0; seg < 5; ++seg) {
      const Vec a = rng.ball_point(n, 3.0);
      const Vec b = rng.ball_point(n, 3.0);
      TaylorCheck tc = taylor_check(f, a, b);
      CAPTURE(trial);
      CAPTURE(seg);
      CHECK(tc.pass);
      CHECK(tc.lower <= tc.upper);
      ++checked;
    }
  }
  CHECK(checked == 500);
}

TEST_CASE("arc minimum of a single quadratic form") {
  // v'Hv = 2 cos(2t) for H = diag(2, -2).
  ArcMin am = arc_argmin_single(mat2(2.0, 0.0, 0.0, -2.0), 0.0, 0.5 * kPi);
  CHECK(am.value == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(am.angle == doctest::Approx(0.5 * kPi).epsilon(1e-12));

  // v'Hv = sin(2t) for the off-diagonal form.
  ArcMin off = arc_argmin_single(mat2(0.0, 1.0, 1.0, 0.0), 0.0, kPi);
  CHECK(off.value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(off.angle == doctest::Approx(0.75 * kPi).epsilon(1e-12));

  // Restricting the interval moves the minimum to an endpoint.
  CHECK(arc_min_single(mat2(2.0, 0.0, 0.0, -2.0), 0.0, 0.25 * kPi) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Point interval evaluates the form.
  CHECK(arc_min_single(mat2(2.0, 0.0, 0.0, -2.0), 0.3, 0.3) ==
        doctest::Approx(2.0 * std::cos(0.6)).epsilon(1e-12));
}

TEST_CASE("arc minimum of an envelope") {
  const std::vector<Mat> hs = {mat2(2.0, 0.0, 0.0, 0.0),
                               mat2(0.0, 0.0, 0.0, 2.0)};
  ArcMin am = arc_argmin_envelope(hs, 0.0, 0.5 * kPi);
  CHECK(am.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(am.angle == doctest::Approx(0.25 * kPi).epsilon(1e-12));

  // Envelope of one form reduces to the single-form answer.
  CHECK(arc_min_envelope({mat2(0.0, 1.0, 1.0, 0.0)}, 0.0, kPi) ==
        doctest::Approx(arc_min_single(mat2(0.0, 1.0, 1.0, 0.0), 0.0, kPi)));
}

TEST_CASE("arc minima scale linearly with the form") {
  Rng rng(515);
  for (int trial = 0; trial < 25; ++trial) {
    Mat h(2, 2);
    h << rng.normal(), rng.normal(), 0.0, rng.normal();
    h(1, 0) = h(0, 1);
    const double t0 = rng.uniform(-2.0, 2.0);
    const double t1 = t0 + rng.uniform(0.0, kPi);
    const double base = arc_min_single(h, t0, t1);
    for (double c : {0.0, 0.5, 2.0, 10.0}) {
      CHECK(arc_min_single(c * h, t0, t1) ==
            doctest::Approx(c * base).epsilon(1e-12));
    }
    Mat g(2, 2);
    g << rng.normal(), rng.normal(), 0.0, rng.normal();
    g(1, 0) = g(0, 1);
    const double env = arc_min_envelope({h, g}, t0, t1);
    for (double c : {0.5, 2.0, 10.0}) {
      CHECK(arc_min_envelope({c * h, c * g}, t0, t1) ==
            doctest::Approx(c * env).epsilon(1e-11));
    }
  }
}

TEST_CASE("envelope minimum dominates each member minimum") {
  Rng rng(616);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Mat> hs;
    const int count = 1 + static_cast<int>(rng.index(4));
    for (int k = 0; k < count; ++k) {
      Mat h(2, 2);
      h << rng.normal(), rng.normal(), 0.0, rng.normal();
      h(1, 0) = h(0, 1);
      hs.push_back(h);
    }
    const double t0 = rng.uniform(-3.0, 3.0);
    const double t1 = t0 + rng.uniform(0.0, 2.0 * kPi);
    const double env = arc_min_envelope(hs, t0, t1);
    double best_single = -kInf;
    for (const Mat& h : hs)
      best_single = std::max(best_single, arc_min_single(h, t0, t1));
    CHECK(env >= best_single - 1e-12);

    // Dense scan cross-check of the envelope minimum. At a crossing the
    // envelope has a corner, so the grid error is first order in the step:
    // bound it by the worst member slope |q'| <= 2 sqrt(A^2 + B^2).
    double scanned = kInf;
    double slope = 0.0;
    for (const Mat& h : hs) {
      const double a = 0.5 * (h(0, 0) - h(1, 1));
      const double b = h(0, 1);
      slope = std::max(slope, 2.0 * std::hypot(a, b));
    }
    for (int s = 0; s <= 2000; ++s) {
      const double t = t0 + (t1 - t0) * s / 2000.0;
      Vec v = vec2(std::cos(t), std::sin(t));
      double e = -kInf;
      for (const Mat& h : hs) e = std::max(e, v.dot(h * v));
      scanned = std::min(scanned, e);
    }
    const double grid_err = slope * (t1 - t0) / 2000.0 / 2.0 + 1e-9;
    CHECK(env <= scanned + 1e-12);
    CHECK(env >= scanned - grid_err);
  }
}

TEST_CASE("argmin angle reproduces the reported value") {
  Rng rng(717);
  for (int trial = 0; trial < 20; ++trial) {
    Mat h(2, 2);
    h << rng.normal(), rng.normal(), 0.0, rng.normal();
    h(1, 0) = h(0, 1);
    const double t0 = rng.uniform(-1.0, 1.0);
    const double t1 = t0 + rng.uniform(0.1, kPi);
    ArcMin am = arc_argmin_single(h, t0, t1);
    Vec v = vec2(std::cos(am.angle), std::sin(am.angle));
    CHECK(v.dot(h * v) == doctest::Approx(am.value).epsilon(1e-12));
    CHECK(am.angle >= t0 - 1e-12);
    CHECK(am.angle <= t1 + 1e-12);
  }
}
