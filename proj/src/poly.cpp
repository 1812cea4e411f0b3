#include "opgeom/poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace opgeom {

namespace {

bool graded_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  const int da = std::accumulate(a.begin(), a.end(), 0);
  const int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da < db;
  return a < b;
}

}  // namespace

PolyScalarField PolyScalarField::constant(int n, double c) {
  PolyScalarField p(n);
  if (c != 0.0) p.terms.emplace_back(std::vector<int>(n, 0), c);
  return p;
}

PolyScalarField PolyScalarField::coordinate(int n, int i) {
  PolyScalarField p(n);
  std::vector<int> e(n, 0);
  e[i] = 1;
  p.terms.emplace_back(std::move(e), 1.0);
  return p;
}

void PolyScalarField::add_term(std::vector<int> exp, double c) {
  terms.emplace_back(std::move(exp), c);
  canonicalize();
}

void PolyScalarField::canonicalize() {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return graded_lex_less(a.first, b.first); });
  std::vector<std::pair<std::vector<int>, double>> merged;
  for (auto& t : terms) {
    if (!merged.empty() && merged.back().first == t.first)
      merged.back().second += t.second;
    else
      merged.push_back(std::move(t));
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const auto& t) { return t.second == 0.0; }),
               merged.end());
  terms = std::move(merged);
}

double PolyScalarField::eval(const Vec& x) const {
  double r = 0;
  for (const auto& [exp, c] : terms) {
    double t = c;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < exp[i]; ++k) t *= x(i);
    r += t;
  }
  return r;
}

Jet2 PolyScalarField::jet(const Vec& x) const {
  Jet2 j(n);
  for (const auto& [exp, c] : terms) {
    // split off powers so value, gradient and Hessian come from one pass
    double t = c;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < exp[i]; ++k) t *= x(i);
    j.v += t;
    for (int i = 0; i < n; ++i) {
      if (exp[i] == 0) continue;
      double d = c * exp[i];
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < exp[l] - (l == i ? 1 : 0); ++k) d *= x(l);
      j.g(i) += d;
      for (int jv = i; jv < n; ++jv) {
        const int drop = (jv == i) ? 2 : 1;
        if (jv == i && exp[i] < 2) continue;
        if (jv != i && exp[jv] == 0) continue;
        double dd = c * exp[i] * (jv == i ? exp[i] - 1 : exp[jv]);
        for (int l = 0; l < n; ++l) {
          int p = exp[l];
          if (l == i) p -= (jv == i) ? drop : 1;
          if (l == jv && jv != i) p -= 1;
          for (int k = 0; k < p; ++k) dd *= x(l);
        }
        j.h(i, jv) += dd;
        if (jv != i) j.h(jv, i) += dd;
      }
    }
  }
  return j;
}

PolyScalarField PolyScalarField::diff(int i) const {
  PolyScalarField d(n);
  for (const auto& [exp, c] : terms) {
    if (exp[i] == 0) continue;
    std::vector<int> e = exp;
    e[i] -= 1;
    d.terms.emplace_back(std::move(e), c * exp[i]);
  }
  d.canonicalize();
  return d;
}

int PolyScalarField::degree() const {
  int d = 0;
  for (const auto& [exp, c] : terms) d = std::max(d, std::accumulate(exp.begin(), exp.end(), 0));
  return d;
}

double PolyScalarField::max_abs_coeff() const {
  double m = 0;
  for (const auto& [exp, c] : terms) m = std::max(m, std::abs(c));
  return m;
}

PolyScalarField PolyScalarField::compose_affine(const Mat& M, const Vec& d) const {
  // x_i = sum_j M(i,j) y_j + d(i)
  std::vector<PolyScalarField> lin(n);
  for (int i = 0; i < n; ++i) {
    PolyScalarField li = PolyScalarField::constant(n, d(i));
    for (int j = 0; j < n; ++j)
      if (M(i, j) != 0.0) li = li + M(i, j) * PolyScalarField::coordinate(n, j);
    lin[i] = li;
  }
  PolyScalarField out(n);
  for (const auto& [exp, c] : terms) {
    PolyScalarField t = PolyScalarField::constant(n, c);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < exp[i]; ++k) t = t * lin[i];
    out = out + t;
  }
  return out;
}

PolyScalarField operator+(const PolyScalarField& a, const PolyScalarField& b) {
  PolyScalarField r = a;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  r.canonicalize();
  return r;
}

PolyScalarField operator-(const PolyScalarField& a, const PolyScalarField& b) { return a + (-1.0 * b); }

PolyScalarField operator*(const PolyScalarField& a, const PolyScalarField& b) {
  PolyScalarField r(a.n);
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      std::vector<int> e(a.n);
      for (int i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
      r.terms.emplace_back(std::move(e), ca * cb);
    }
  r.canonicalize();
  return r;
}

PolyScalarField operator*(double s, const PolyScalarField& a) {
  PolyScalarField r = a;
  for (auto& t : r.terms) t.second *= s;
  r.canonicalize();
  return r;
}

PolyMatrixField PolyMatrixField::constant(const Mat& m, int n) {
  PolyMatrixField f(n, static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int r = 0; r < f.rows; ++r)
    for (int c = 0; c < f.cols; ++c) f.at(r, c) = PolyScalarField::constant(n, m(r, c));
  return f;
}

PolyMatrixField PolyMatrixField::identity(int size, int n) {
  return constant(Mat::Identity(size, size), n);
}

Mat PolyMatrixField::eval(const Vec& x) const {
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = at(r, c).eval(x);
  return m;
}

JetMat PolyMatrixField::jet(const Vec& x) const {
  JetMat j = JetMat::zero(rows, cols, n);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) j.set_entry(r, c, at(r, c).jet(x));
  return j;
}

PolyMatrixField PolyMatrixField::diff(int i) const {
  PolyMatrixField d(n, rows, cols);
  for (size_t k = 0; k < e.size(); ++k) d.e[k] = e[k].diff(i);
  return d;
}

PolyMatrixField PolyMatrixField::compose_affine(const Mat& M, const Vec& dd) const {
  PolyMatrixField r(n, rows, cols);
  for (size_t k = 0; k < e.size(); ++k) r.e[k] = e[k].compose_affine(M, dd);
  return r;
}

double PolyMatrixField::max_abs_coeff() const {
  double m = 0;
  for (const auto& p : e) m = std::max(m, p.max_abs_coeff());
  return m;
}

PolyMatrixField operator+(const PolyMatrixField& a, const PolyMatrixField& b) {
  PolyMatrixField r = a;
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = r.e[k] + b.e[k];
  return r;
}

PolyMatrixField operator-(const PolyMatrixField& a, const PolyMatrixField& b) {
  PolyMatrixField r = a;
  for (size_t k = 0; k < r.e.size(); ++k) r.e[k] = r.e[k] - b.e[k];
  return r;
}

PolyMatrixField operator*(const PolyMatrixField& a, const PolyMatrixField& b) {
  if (a.cols != b.rows) throw std::invalid_argument("PolyMatrixField: shape mismatch");
  PolyMatrixField r(a.n, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < b.cols; ++j) {
      PolyScalarField s(a.n);
      for (int k = 0; k < a.cols; ++k) s = s + a.at(i, k) * b.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

PolyMatrixField operator*(double s, const PolyMatrixField& a) {
  PolyMatrixField r = a;
  for (auto& p : r.e) p = s * p;
  return r;
}

PolyMatrixField operator*(const PolyScalarField& s, const PolyMatrixField& a) {
  PolyMatrixField r = a;
  for (auto& p : r.e) p = s * p;
  return r;
}

}  // namespace opgeom
