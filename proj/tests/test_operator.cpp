#include "doctest.h"

#include <cmath>

#include "opgeom/operator_spec.hpp"

using namespace opgeom;

namespace {

OperatorSpec unit_chart_op(int n, int m) {
  OperatorSpec op;
  op.n = n;
  op.m = m;
  op.lo = Vec::Constant(n, -1.0);
  op.hi = Vec::Constant(n, 1.0);
  op.A.assign(n, PolyMatrixField(n, m, m));
  op.B = PolyMatrixField(n, m, m);
  return op;
}

}  // namespace

TEST_CASE("symbol and zero-order parts evaluate the fields") {
  Rng rng(5);
  const OperatorSpec op = random_operator(rng, 2, 2, 2);
  Vec x(2);
  x << 0.25, -0.5;
  const SymbolJets sj = symbol_at(op, x);
  for (int i = 0; i < 2; ++i) {
    CHECK((sj.sigma[i].v - op.A[i].eval(x)).norm() < 1e-14);
    CHECK((sj.sigma[i].grad(0) - op.A[i].diff(0).eval(x)).norm() < 1e-13);
  }
  CHECK((b_at(op, x).v - op.B.eval(x)).norm() < 1e-14);
}

TEST_CASE("unipotent gauge with polynomial entry transforms the zero-order part") {
  // P = [[1, x0], [0, 1]] acting on A^0 = id, A^1 = 0, B = 0:
  // B' = P A^0 d_0(P^{-1}) = [[0, -1], [0, 0]]
  OperatorSpec op = unit_chart_op(2, 2);
  op.A[0] = PolyMatrixField::identity(2, 2);

  GaugeTransform g;
  g.n = 2;
  g.m = 2;
  g.P = PolyMatrixField::identity(2, 2);
  g.P.at(0, 1) = PolyScalarField::coordinate(2, 0);
  g.P_inv = PolyMatrixField::identity(2, 2);
  g.P_inv.at(0, 1) = -1.0 * PolyScalarField::coordinate(2, 0);
  REQUIRE(gauge_valid(g, op.lo, op.hi));

  const OperatorSpec op2 = apply_gauge(op, g);
  Vec x(2);
  x << 0.3, 0.8;
  CHECK((op2.B.eval(x) - (Mat(2, 2) << 0, -1, 0, 0).finished()).norm() < 1e-13);
  // symbol conjugates: P id P^{-1} = id
  CHECK((op2.A[0].eval(x) - Mat::Identity(2, 2)).norm() < 1e-13);
}

TEST_CASE("constant gauge conjugates the zero-order part") {
  Rng rng(9);
  const OperatorSpec op = random_operator(rng, 2, 3, 2);
  Mat p(3, 3);
  do {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) p(i, j) = rng.normal();
  } while (std::abs(p.determinant()) < 0.3);

  GaugeTransform g;
  g.n = 2;
  g.m = 3;
  g.P = PolyMatrixField::constant(p, 2);
  g.P_inv = PolyMatrixField::constant(p.inverse(), 2);
  const OperatorSpec op2 = apply_gauge(op, g);

  Vec x(2);
  x << -0.2, 0.4;
  CHECK((op2.B.eval(x) - p * op.B.eval(x) * p.inverse()).norm() < 1e-12);
  for (int i = 0; i < 2; ++i)
    CHECK((op2.A[i].eval(x) - p * op.A[i].eval(x) * p.inverse()).norm() < 1e-12);
}

TEST_CASE("gauge application is a group action") {
  Rng rng(13);
  const OperatorSpec op = random_operator(rng, 2, 2, 1);
  const GaugeTransform g1 = random_gauge(rng, 2, 2, 1);
  const GaugeTransform g2 = random_gauge(rng, 2, 2, 1);
  REQUIRE(gauge_valid(g1, op.lo, op.hi));
  REQUIRE(gauge_valid(g2, op.lo, op.hi));

  const OperatorSpec seq = apply_gauge(apply_gauge(op, g1), g2);
  GaugeTransform g12;
  g12.n = 2;
  g12.m = 2;
  g12.P = g2.P * g1.P;
  g12.P_inv = g1.P_inv * g2.P_inv;
  const OperatorSpec comp = apply_gauge(op, g12);

  for (int t = 0; t < 4; ++t) {
    Vec x(2);
    x << rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9);
    CHECK((seq.B.eval(x) - comp.B.eval(x)).norm() < 1e-10);
    for (int i = 0; i < 2; ++i)
      CHECK((seq.A[i].eval(x) - comp.A[i].eval(x)).norm() < 1e-10);
  }
}

TEST_CASE("gauge validity rejects a wrong inverse") {
  GaugeTransform g;
  g.n = 2;
  g.m = 2;
  g.P = PolyMatrixField::identity(2, 2);
  g.P.at(0, 1) = PolyScalarField::coordinate(2, 0);
  g.P_inv = PolyMatrixField::identity(2, 2);  // not the inverse
  CHECK_FALSE(gauge_valid(g, Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)));
}

TEST_CASE("affine chart change pushes the symbol forward and is invertible") {
  Rng rng(21);
  const OperatorSpec op = random_operator(rng, 2, 2, 2);
  Mat L(2, 2);
  L << 2.0, 1.0, 0.0, -1.0;
  Vec c(2);
  c << 0.5, -0.25;
  const AffineDiffeo phi{L, c};
  const OperatorSpec op2 = apply_affine_diffeo(op, phi);

  // chart corners map into the new chart box
  CHECK(op2.n == 2);
  Vec x(2);
  x << 0.1, -0.3;
  const Vec y = L * x + c;
  REQUIRE(op2.inside(y));
  // A'^j(y) = sum_i L_ji A^i(x)
  for (int j = 0; j < 2; ++j) {
    Mat want = Mat::Zero(2, 2);
    for (int i = 0; i < 2; ++i) want += L(j, i) * op.A[i].eval(x);
    CHECK((op2.A[j].eval(y) - want).norm() < 1e-11);
  }
  CHECK((op2.B.eval(y) - op.B.eval(x)).norm() < 1e-11);

  // the inverse map restores the fields; the chart box can only grow because
  // each pushforward keeps the bounding box of a sheared image
  const AffineDiffeo inv{L.inverse(), -(L.inverse() * c)};
  const OperatorSpec back = apply_affine_diffeo(op2, inv);
  CHECK((back.lo.array() <= op.lo.array() + 1e-12).all());
  CHECK((back.hi.array() >= op.hi.array() - 1e-12).all());
  CHECK((back.B.eval(x) - op.B.eval(x)).norm() < 1e-10);
  for (int i = 0; i < 2; ++i) CHECK((back.A[i].eval(x) - op.A[i].eval(x)).norm() < 1e-10);

  // axis-aligned maps round-trip the box exactly
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 0.5;
  const AffineDiffeo ax{d, c};
  const AffineDiffeo ax_inv{d.inverse(), -(d.inverse() * c)};
  const OperatorSpec round = apply_affine_diffeo(apply_affine_diffeo(op, ax), ax_inv);
  CHECK((round.lo - op.lo).norm() < 1e-12);
  CHECK((round.hi - op.hi).norm() < 1e-12);
}

TEST_CASE("composing symbol, connection forms, and remainder rebuilds the operator") {
  Rng rng(29);
  const int n = 2, m = 2;
  std::vector<PolyMatrixField> sigma(n), omega(n);
  for (int i = 0; i < n; ++i) {
    sigma[i] = random_poly_matrix(rng, n, m, m, 1);
    omega[i] = random_poly_matrix(rng, n, m, m, 1);
  }
  const PolyMatrixField s0 = random_poly_matrix(rng, n, m, m, 1);
  const OperatorSpec op =
      compose_operator(Vec::Constant(n, -1.0), Vec::Constant(n, 1.0), sigma, omega, s0);

  Vec x(2);
  x << 0.6, -0.1;
  Mat want = s0.eval(x);
  for (int i = 0; i < n; ++i) want += sigma[i].eval(x) * omega[i].eval(x);
  CHECK((op.B.eval(x) - want).norm() < 1e-12);
  for (int i = 0; i < n; ++i) CHECK((op.A[i].eval(x) - sigma[i].eval(x)).norm() < 1e-14);
}

TEST_CASE("remainder shifts by the symbol contraction when the forms shift") {
  Rng rng(33);
  const int n = 2, m = 3;
  std::vector<PolyMatrixField> sigma(n), omega(n), beta(n), shifted(n);
  for (int i = 0; i < n; ++i) {
    sigma[i] = random_poly_matrix(rng, n, m, m, 1);
    omega[i] = random_poly_matrix(rng, n, m, m, 1);
    beta[i] = random_poly_matrix(rng, n, m, m, 1);
    shifted[i] = omega[i] + beta[i];
  }
  const PolyMatrixField s0 = random_poly_matrix(rng, n, m, m, 1);
  const Vec lo = Vec::Constant(n, -1.0), hi = Vec::Constant(n, 1.0);

  // same operator iff the remainder absorbs -sigma^i beta_i
  PolyMatrixField s0_shifted = s0;
  for (int i = 0; i < n; ++i) s0_shifted = s0_shifted - sigma[i] * beta[i];

  const OperatorSpec a = compose_operator(lo, hi, sigma, omega, s0);
  const OperatorSpec b = compose_operator(lo, hi, sigma, shifted, s0_shifted);
  for (int t = 0; t < 5; ++t) {
    Vec x(2);
    x << rng.uniform(-1, 1), rng.uniform(-1, 1);
    CHECK((a.B.eval(x) - b.B.eval(x)).norm() < 1e-12);
  }
}

TEST_CASE("random operators are deterministic in the seed and regular at centre") {
  Rng r1(42), r2(42);
  const OperatorSpec a = random_operator(r1, 2, 2, 2);
  const OperatorSpec b = random_operator(r2, 2, 2, 2);
  Vec x(2);
  x << 0.77, -0.45;
  CHECK((a.B.eval(x) - b.B.eval(x)).norm() == 0.0);
  CHECK((a.A[0].eval(x) - b.A[0].eval(x)).norm() == 0.0);

  Rng r3(4242);
  const OperatorSpec c = random_regular_operator(r3, 2, 3, 2);
  SymbolPoint s = symbol_at(c, c.center()).value();
  CHECK(general_position(s).general);
}
