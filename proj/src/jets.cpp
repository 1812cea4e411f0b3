#include "opgeom/jets.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace opgeom {

Jet2 Jet2::constant(int n, double c) {
  Jet2 j(n);
  j.v = c;
  return j;
}

Jet2 Jet2::coordinate(int n, int i, double value) {
  Jet2 j(n);
  j.v = value;
  j.g(i) = 1.0;
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.v = a.v + b.v;
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.v = a.v - b.v;
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r(a.dim());
  r.v = -a.v;
  r.g = -a.g;
  r.h = -a.h;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(a.dim());
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  r.h = a.v * b.h + b.v * a.h + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 r(a.dim());
  r.v = s * a.v;
  r.g = s * a.g;
  r.h = s * a.h;
  return r;
}

Jet2 operator+(const Jet2& a, double c) {
  Jet2 r = a;
  r.v += c;
  return r;
}

Jet2 operator-(const Jet2& a, double c) {
  Jet2 r = a;
  r.v -= c;
  return r;
}

Jet2 jet_inv(const Jet2& a) {
  if (a.v == 0.0) throw std::domain_error("jet_inv: zero value");
  Jet2 r(a.dim());
  const double iv = 1.0 / a.v;
  r.v = iv;
  r.g = -iv * iv * a.g;
  r.h = -iv * iv * a.h + 2.0 * iv * iv * iv * a.g * a.g.transpose();
  return r;
}

Jet2 jet_div(const Jet2& a, const Jet2& b) { return a * jet_inv(b); }

Jet2 jet_sqrt(const Jet2& a) {
  if (a.v <= 0.0) throw std::domain_error("jet_sqrt: nonpositive value");
  Jet2 r(a.dim());
  r.v = std::sqrt(a.v);
  r.g = a.g / (2.0 * r.v);
  r.h = (a.h - 2.0 * r.g * r.g.transpose()) / (2.0 * r.v);
  return r;
}

Jet2 JetMat::entry(int r, int c) const {
  Jet2 e(n);
  e.v = v(r, c);
  for (int i = 0; i < n; ++i) {
    e.g(i) = g[i](r, c);
    for (int j = 0; j < n; ++j) e.h(i, j) = hess(i, j)(r, c);
  }
  return e;
}

void JetMat::set_entry(int r, int c, const Jet2& e) {
  v(r, c) = e.v;
  for (int i = 0; i < n; ++i) {
    g[i](r, c) = e.g(i);
    for (int j = 0; j < n; ++j) hess(i, j)(r, c) = e.h(i, j);
  }
}

JetMat JetMat::zero(int rows, int cols, int n) {
  JetMat m;
  m.n = n;
  m.v = Mat::Zero(rows, cols);
  m.g.assign(n, Mat::Zero(rows, cols));
  m.h.assign(static_cast<size_t>(n) * n, Mat::Zero(rows, cols));
  return m;
}

JetMat JetMat::constant(const Mat& value, int n) {
  JetMat m = zero(static_cast<int>(value.rows()), static_cast<int>(value.cols()), n);
  m.v = value;
  return m;
}

JetMat JetMat::identity(int size, int n) { return constant(Mat::Identity(size, size), n); }

JetMat operator+(const JetMat& a, const JetMat& b) {
  JetMat r = a;
  r.v += b.v;
  for (int i = 0; i < a.n; ++i) r.g[i] += b.g[i];
  for (size_t k = 0; k < r.h.size(); ++k) r.h[k] += b.h[k];
  return r;
}

JetMat operator-(const JetMat& a, const JetMat& b) {
  JetMat r = a;
  r.v -= b.v;
  for (int i = 0; i < a.n; ++i) r.g[i] -= b.g[i];
  for (size_t k = 0; k < r.h.size(); ++k) r.h[k] -= b.h[k];
  return r;
}

JetMat operator-(const JetMat& a) { return -1.0 * a; }

JetMat operator*(const JetMat& a, const JetMat& b) {
  const int n = a.n;
  JetMat r = JetMat::zero(a.rows(), b.cols(), n);
  r.v = a.v * b.v;
  for (int i = 0; i < n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.hess(i, j) = a.hess(i, j) * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.hess(i, j);
  return r;
}

JetMat operator*(double s, const JetMat& a) {
  JetMat r = a;
  r.v *= s;
  for (auto& m : r.g) m *= s;
  for (auto& m : r.h) m *= s;
  return r;
}

JetMat operator*(const Jet2& s, const JetMat& a) {
  const int n = a.n;
  JetMat r = JetMat::zero(a.rows(), a.cols(), n);
  r.v = s.v * a.v;
  for (int i = 0; i < n; ++i) r.g[i] = s.g(i) * a.v + s.v * a.g[i];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r.hess(i, j) = s.h(i, j) * a.v + s.g(i) * a.g[j] + s.g(j) * a.g[i] + s.v * a.hess(i, j);
  return r;
}

JetMat jet_transpose(const JetMat& a) {
  JetMat r = a;
  r.v = a.v.transpose();
  for (int i = 0; i < a.n; ++i) r.g[i] = a.g[i].transpose();
  for (size_t k = 0; k < r.h.size(); ++k) r.h[k] = a.h[k].transpose();
  return r;
}

Jet2 jet_trace(const JetMat& a) {
  Jet2 r(a.n);
  r.v = a.v.trace();
  for (int i = 0; i < a.n; ++i) {
    r.g(i) = a.g[i].trace();
    for (int j = 0; j < a.n; ++j) r.h(i, j) = a.hess(i, j).trace();
  }
  return r;
}

JetMat jet_commutator(const JetMat& a, const JetMat& b) { return a * b - b * a; }

JetMat jet_matinv(const JetMat& a) {
  const int n = a.n;
  Eigen::PartialPivLU<Mat> lu(a.v);
  JetMat x = JetMat::zero(a.rows(), a.cols(), n);
  x.v = lu.solve(Mat::Identity(a.rows(), a.rows()));
  for (int i = 0; i < n; ++i) x.g[i] = -x.v * a.g[i] * x.v;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      x.hess(i, j) =
          -x.v * a.hess(i, j) * x.v + x.v * a.g[i] * x.v * a.g[j] * x.v + x.v * a.g[j] * x.v * a.g[i] * x.v;
  return x;
}

JetMat jet_linsolve(const JetMat& a, const JetMat& b) {
  const int n = a.n;
  Eigen::PartialPivLU<Mat> lu(a.v);
  JetMat x = JetMat::zero(a.rows(), b.cols(), n);
  x.v = lu.solve(b.v);
  for (int i = 0; i < n; ++i) x.g[i] = lu.solve(b.g[i] - a.g[i] * x.v);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      x.hess(i, j) = lu.solve(b.hess(i, j) - a.hess(i, j) * x.v - a.g[i] * x.g[j] - a.g[j] * x.g[i]);
  return x;
}

void clamp_to_order1(JetMat& a) {
  for (auto& m : a.h) m.setZero();
}

void clamp_to_order1(Jet2& a) { a.h.setZero(); }

}  // namespace opgeom
