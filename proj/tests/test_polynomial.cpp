#include "oracles.hpp"
#include "optcert/polynomial.hpp"

#include <doctest.h>

using namespace optcert;
using namespace optcert::testing;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("evaluation, gradient, and hessian of a fixed polynomial") {
  // p(x, y) = 3 x^2 y - 2 y + 7
  Polynomial p(2, {{3.0, {2, 1}}, {-2.0, {0, 1}}, {7.0, {0, 0}}});
  const Vec x = vec2(2.0, -1.0);

  CHECK(p.eval(x) == doctest::Approx(-3.0).epsilon(1e-15));

  const Vec g = p.gradient(x);
  CHECK(g[0] == doctest::Approx(-12.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-15));

  const Mat h = p.hessian(x);
  CHECK(h(0, 0) == doctest::Approx(-6.0));
  CHECK(h(0, 1) == doctest::Approx(12.0));
  CHECK(h(1, 0) == doctest::Approx(12.0));
  CHECK(h(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("canonical form merges duplicates and drops zeros") {
  Polynomial p(2, {{1.0, {1, 0}}, {2.0, {1, 0}}, {0.0, {0, 1}}, {5.0, {0, 0}},
                   {-5.0, {0, 0}}});
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms()[0].coeff == 3.0);
  CHECK(p.terms()[0].exps == std::vector<int>{1, 0});
  CHECK(p.degree() == 1);

  Polynomial z(3, {{2.0, {1, 1, 0}}, {-2.0, {1, 1, 0}}});
  CHECK(z.is_zero());
  CHECK(z.degree() == 0);
}

TEST_CASE("term order in the canonical form is deterministic") {
  Polynomial p(2, {{1.0, {0, 2}}, {1.0, {2, 0}}, {1.0, {1, 1}}});
  Polynomial q(2, {{1.0, {1, 1}}, {1.0, {0, 2}}, {1.0, {2, 0}}});
  REQUIRE(p.terms().size() == q.terms().size());
  for (std::size_t i = 0; i < p.terms().size(); ++i) {
    CHECK(p.terms()[i].exps == q.terms()[i].exps);
    CHECK(p.terms()[i].coeff == q.terms()[i].coeff);
  }
}

TEST_CASE("degree cap and shape errors") {
  CHECK_THROWS_AS(Polynomial(1, {{1.0, {7}}}), Error);
  CHECK_NOTHROW(Polynomial(1, {{1.0, {6}}}));
  CHECK_THROWS_AS(Polynomial(2, {{1.0, {1}}}), Error);       // wrong length
  CHECK_THROWS_AS(Polynomial(1, {{1.0, {-1}}}), Error);      // negative exponent
  CHECK_THROWS_AS(Polynomial(0, {}), Error);                 // empty dimension
  CHECK_THROWS_AS(Polynomial(2, {{1.0, {1, 0}}}).partial(2), DimensionError);
}

TEST_CASE("partial derivatives are exact") {
  // p = 3 x^2 y - 2 y + 7
  Polynomial p(2, {{3.0, {2, 1}}, {-2.0, {0, 1}}, {7.0, {0, 0}}});
  Polynomial px = p.partial(0);
  Polynomial py = p.partial(1);
  for (double u : {-1.5, 0.0, 2.25}) {
    for (double v : {-2.0, 0.5}) {
      const Vec x = vec2(u, v);
      CHECK(px.eval(x) == doctest::Approx(6.0 * u * v).epsilon(1e-14));
      CHECK(py.eval(x) == doctest::Approx(3.0 * u * u - 2.0).epsilon(1e-14));
      const Vec g = p.gradient(x);
      CHECK(g[0] == doctest::Approx(px.eval(x)).epsilon(1e-14));
      CHECK(g[1] == doctest::Approx(py.eval(x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("add_scaled combines polynomials") {
  Polynomial p(2, {{1.0, {2, 0}}, {1.0, {0, 1}}});
  Polynomial q(2, {{2.0, {2, 0}}, {-3.0, {0, 0}}});
  p.add_scaled(q, -0.5);
  const Vec x = vec2(1.5, -2.0);
  CHECK(p.eval(x) ==
        doctest::Approx((1.5 * 1.5 - 2.0) - 0.5 * (2.0 * 1.5 * 1.5 - 3.0)));
  Polynomial r(3, {});
  CHECK_THROWS_AS(p.add_scaled(r, 1.0), DimensionError);
}

TEST_CASE("analytic derivatives match central differences on random polynomials") {
  Rng rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng.index(3));
    std::vector<Term> terms;
    const int nterms = 3 + static_cast<int>(rng.index(6));
    for (int t = 0; t < nterms; ++t) {
      std::vector<int> e(n, 0);
      int budget = 4;
      for (int i = 0; i < n; ++i) {
        const int d = static_cast<int>(rng.index(budget + 1));
        e[i] = d;
        budget -= d;
      }
      terms.push_back({rng.uniform(-2.0, 2.0), e});
    }
    Polynomial p(n, terms);
    PiecewiseFn f(p);
    for (int k = 0; k < 3; ++k) {
      const Vec x = rng.ball_point(n, 1.0);
      const Vec g = p.gradient(x);
      const Vec gfd = fd_gradient(f, x);
      CHECK((g - gfd).lpNorm<Eigen::Infinity>() <= 1e-6);
      const Mat h = p.hessian(x);
      const Mat hfd = fd_hessian(f, x);
      CHECK((h - hfd).lpNorm<Eigen::Infinity>() <= 1e-4);
      CHECK((h - h.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    }
  }
}

TEST_CASE("constant and zero helpers") {
  Polynomial c = Polynomial::constant(2, 4.5);
  CHECK(c.eval(vec2(3.0, -7.0)) == 4.5);
  CHECK(c.gradient(vec2(1.0, 1.0)).norm() == 0.0);
  Polynomial z = Polynomial::zero(2);
  CHECK(z.is_zero());
  CHECK(z.eval(vec2(2.0, 2.0)) == 0.0);
}
