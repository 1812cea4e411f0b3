#pragma once

#include <utility>
#include <vector>

#include "opgeom/jets.hpp"

namespace opgeom {

// Sparse multivariate polynomial in n chart variables with real coefficients.
// Terms are kept graded-lex sorted (total degree, then exponent vector), with
// exactly-zero coefficients dropped.
struct PolyScalarField {
  int n = 0;
  std::vector<std::pair<std::vector<int>, double>> terms;

  PolyScalarField() = default;
  explicit PolyScalarField(int n) : n(n) {}

  static PolyScalarField constant(int n, double c);
  static PolyScalarField coordinate(int n, int i);

  void add_term(std::vector<int> exp, double c);
  void canonicalize();

  double eval(const Vec& x) const;
  Jet2 jet(const Vec& x) const;
  PolyScalarField diff(int i) const;
  int degree() const;
  double max_abs_coeff() const;
  bool is_zero() const { return terms.empty(); }

  // substitute x = M y + d
  PolyScalarField compose_affine(const Mat& M, const Vec& d) const;
};

PolyScalarField operator+(const PolyScalarField& a, const PolyScalarField& b);
PolyScalarField operator-(const PolyScalarField& a, const PolyScalarField& b);
PolyScalarField operator*(const PolyScalarField& a, const PolyScalarField& b);
PolyScalarField operator*(double s, const PolyScalarField& a);

struct PolyMatrixField {
  int n = 0, rows = 0, cols = 0;
  std::vector<PolyScalarField> e;  // row-major

  PolyMatrixField() = default;
  PolyMatrixField(int n, int rows, int cols)
      : n(n), rows(rows), cols(cols), e(static_cast<size_t>(rows) * cols, PolyScalarField(n)) {}

  PolyScalarField& at(int r, int c) { return e[static_cast<size_t>(r) * cols + c]; }
  const PolyScalarField& at(int r, int c) const { return e[static_cast<size_t>(r) * cols + c]; }

  static PolyMatrixField constant(const Mat& m, int n);
  static PolyMatrixField identity(int size, int n);

  Mat eval(const Vec& x) const;
  JetMat jet(const Vec& x) const;
  PolyMatrixField diff(int i) const;
  PolyMatrixField compose_affine(const Mat& M, const Vec& d) const;
  double max_abs_coeff() const;
};

PolyMatrixField operator+(const PolyMatrixField& a, const PolyMatrixField& b);
PolyMatrixField operator-(const PolyMatrixField& a, const PolyMatrixField& b);
PolyMatrixField operator*(const PolyMatrixField& a, const PolyMatrixField& b);
PolyMatrixField operator*(double s, const PolyMatrixField& a);
PolyMatrixField operator*(const PolyScalarField& s, const PolyMatrixField& a);

}  // namespace opgeom
