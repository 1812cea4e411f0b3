#include "doctest.h"

#include <cmath>

#include "opgeom/poly.hpp"
#include "opgeom/symbol.hpp"

using namespace opgeom;

namespace {

PolyScalarField random_poly(Rng& rng, int n, int deg) {
  PolyScalarField p(n);
  std::vector<int> exp(n, 0);
  // all monomials with total degree <= deg over two variables is enough here
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; a + b <= deg; ++b) {
      exp[0] = a;
      exp[1] = n > 1 ? b : 0;
      p.add_term(exp, rng.normal());
      if (n == 1) break;
    }
  p.canonicalize();
  return p;
}

}  // namespace

TEST_CASE("square of the first coordinate") {
  PolyScalarField p = PolyScalarField::coordinate(2, 0) * PolyScalarField::coordinate(2, 0);
  Vec x(2);
  x << 3.0, 0.0;
  CHECK(p.eval(x) == doctest::Approx(9.0));
  const Jet2 j = p.jet(x);
  CHECK(j.v == doctest::Approx(9.0));
  CHECK(j.g(0) == doctest::Approx(6.0));
  CHECK(j.g(1) == doctest::Approx(0.0));
  CHECK(j.h(0, 0) == doctest::Approx(2.0));
  CHECK(j.h(0, 1) == doctest::Approx(0.0));
  CHECK(p.degree() == 2);
}

TEST_CASE("jet of a random polynomial matches finite differences") {
  Rng rng(17);
  const PolyScalarField p = random_poly(rng, 2, 4);
  Vec x(2);
  x << 0.37, -0.81;
  const Jet2 j = p.jet(x);
  CHECK(j.v == doctest::Approx(p.eval(x)));
  const double h = 1e-5;
  for (int i = 0; i < 2; ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    CHECK(j.g(i) == doctest::Approx((p.eval(xp) - p.eval(xm)) / (2 * h)).epsilon(1e-7));
    for (int k = 0; k < 2; ++k)
      CHECK(j.h(i, k) ==
            doctest::Approx((p.jet(xp).g(k) - p.jet(xm).g(k)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("differentiation") {
  // d/dx0 (x0^2 x1) = 2 x0 x1, d/dx1 = x0^2
  PolyScalarField x0 = PolyScalarField::coordinate(2, 0);
  PolyScalarField x1 = PolyScalarField::coordinate(2, 1);
  PolyScalarField p = x0 * x0 * x1;
  Vec x(2);
  x << 1.5, -2.0;
  CHECK(p.diff(0).eval(x) == doctest::Approx(2 * 1.5 * -2.0));
  CHECK(p.diff(1).eval(x) == doctest::Approx(1.5 * 1.5));
  CHECK(p.diff(0).diff(1).eval(x) == doctest::Approx(2 * 1.5));
  CHECK(PolyScalarField::constant(2, 5.0).diff(0).is_zero());
}

TEST_CASE("arithmetic agrees with pointwise arithmetic") {
  Rng rng(23);
  const PolyScalarField p = random_poly(rng, 2, 3);
  const PolyScalarField q = random_poly(rng, 2, 2);
  for (int t = 0; t < 5; ++t) {
    Vec x(2);
    x << rng.uniform(-1, 1), rng.uniform(-1, 1);
    CHECK((p + q).eval(x) == doctest::Approx(p.eval(x) + q.eval(x)));
    CHECK((p - q).eval(x) == doctest::Approx(p.eval(x) - q.eval(x)));
    CHECK((p * q).eval(x) == doctest::Approx(p.eval(x) * q.eval(x)));
    CHECK((2.5 * p).eval(x) == doctest::Approx(2.5 * p.eval(x)));
  }
}

TEST_CASE("canonicalize merges duplicates and drops zeros") {
  PolyScalarField p(2);
  p.add_term({1, 0}, 2.0);
  p.add_term({1, 0}, -2.0);
  p.add_term({0, 1}, 3.0);
  p.canonicalize();
  CHECK(p.terms.size() == 1);
  CHECK(p.terms[0].first == std::vector<int>{0, 1});
  CHECK(p.max_abs_coeff() == doctest::Approx(3.0));
}

TEST_CASE("affine substitution") {
  Rng rng(31);
  const PolyScalarField p = random_poly(rng, 2, 3);
  Mat M(2, 2);
  M << 0.5, -1.0, 2.0, 0.25;
  Vec d(2);
  d << 0.3, -0.7;
  const PolyScalarField q = p.compose_affine(M, d);
  for (int t = 0; t < 5; ++t) {
    Vec y(2);
    y << rng.uniform(-1, 1), rng.uniform(-1, 1);
    CHECK(q.eval(y) == doctest::Approx(p.eval(M * y + d)).epsilon(1e-12));
  }
}

TEST_CASE("matrix fields evaluate, differentiate, and compose entrywise") {
  Rng rng(37);
  PolyMatrixField F(2, 2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) F.at(r, c) = random_poly(rng, 2, 2);
  Vec x(2);
  x << 0.2, 0.9;
  const Mat v = F.eval(x);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) CHECK(v(r, c) == doctest::Approx(F.at(r, c).eval(x)));

  const JetMat jm = F.jet(x);
  CHECK((jm.v - v).norm() < 1e-14);
  CHECK((jm.grad(0) - F.diff(0).eval(x)).norm() < 1e-12);

  const PolyMatrixField G = PolyMatrixField::identity(2, 2);
  CHECK((G.eval(x) - Mat::Identity(2, 2)).norm() == 0.0);

  const PolyMatrixField P = F * G + 2.0 * G;
  CHECK((P.eval(x) - (v + 2 * Mat::Identity(2, 2))).norm() < 1e-13);

  Mat M(2, 2);
  M << 1.0, 0.5, 0.0, -1.0;
  Vec d(2);
  d << 0.1, 0.2;
  const PolyMatrixField C = F.compose_affine(M, d);
  Vec y(2);
  y << -0.4, 0.6;
  CHECK((C.eval(y) - F.eval(M * y + d)).norm() < 1e-12);

  const PolyScalarField s = PolyScalarField::coordinate(2, 1);
  CHECK(((s * F).eval(x) - x(1) * v).norm() < 1e-13);
}
