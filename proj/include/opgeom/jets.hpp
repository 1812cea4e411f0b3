#pragma once

#include <Eigen/Dense>
#include <vector>

namespace opgeom {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Order-2 jet of a scalar function of n chart variables: value, gradient, Hessian.
struct Jet2 {
  double v = 0.0;
  Vec g;
  Mat h;

  Jet2() = default;
  explicit Jet2(int n) : g(Vec::Zero(n)), h(Mat::Zero(n, n)) {}

  int dim() const { return static_cast<int>(g.size()); }

  static Jet2 constant(int n, double c);
  // jet of the coordinate function x_i evaluated where x_i = value
  static Jet2 coordinate(int n, int i, double value);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);
Jet2 operator+(const Jet2& a, double c);
Jet2 operator-(const Jet2& a, double c);
Jet2 jet_inv(const Jet2& a);               // 1/a, a.v != 0
Jet2 jet_div(const Jet2& a, const Jet2& b);
Jet2 jet_sqrt(const Jet2& a);              // a.v > 0

// Order-2 jet of a rows x cols matrix-valued function of n chart variables.
// h is stored row-major over derivative pairs, h[i*n+j] = d_i d_j value.
struct JetMat {
  int n = 0;
  Mat v;
  std::vector<Mat> g;
  std::vector<Mat> h;

  JetMat() = default;

  int rows() const { return static_cast<int>(v.rows()); }
  int cols() const { return static_cast<int>(v.cols()); }
  const Mat& grad(int i) const { return g[i]; }
  const Mat& hess(int i, int j) const { return h[i * n + j]; }
  Mat& grad(int i) { return g[i]; }
  Mat& hess(int i, int j) { return h[i * n + j]; }

  Jet2 entry(int r, int c) const;
  void set_entry(int r, int c, const Jet2& e);

  static JetMat zero(int rows, int cols, int n);
  static JetMat constant(const Mat& m, int n);
  static JetMat identity(int size, int n);
};

JetMat operator+(const JetMat& a, const JetMat& b);
JetMat operator-(const JetMat& a, const JetMat& b);
JetMat operator-(const JetMat& a);
JetMat operator*(const JetMat& a, const JetMat& b);
JetMat operator*(double s, const JetMat& a);
JetMat operator*(const Jet2& s, const JetMat& a);
JetMat jet_transpose(const JetMat& a);
Jet2 jet_trace(const JetMat& a);
JetMat jet_commutator(const JetMat& a, const JetMat& b);
// inverse of a square matrix jet
JetMat jet_matinv(const JetMat& a);
// X with A X = B, A square
JetMat jet_linsolve(const JetMat& a, const JetMat& b);
// discard second-order data (used where inputs are only order-1 valid)
void clamp_to_order1(JetMat& a);
void clamp_to_order1(Jet2& a);

}  // namespace opgeom
