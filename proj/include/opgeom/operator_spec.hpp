#pragma once

#include <vector>

#include "opgeom/poly.hpp"
#include "opgeom/symbol.hpp"

namespace opgeom {

// First-order operator D u = sum_i A^i d_i u + B u on a box chart [lo, hi]^n.
// A[i] and B are m x m polynomial matrix fields in the chart coordinates.
struct OperatorSpec {
  int n = 0;
  int m = 0;
  Vec lo, hi;
  std::vector<PolyMatrixField> A;
  PolyMatrixField B;

  Vec center() const { return 0.5 * (lo + hi); }
  bool inside(const Vec& x) const;
};

SymbolJets symbol_at(const OperatorSpec& op, const Vec& x);
JetMat b_at(const OperatorSpec& op, const Vec& x);

// Pointwise change of frame u -> P u. P_inv must be an exact polynomial
// inverse of P on the chart (checked by gauge_valid on a sample grid).
struct GaugeTransform {
  int n = 0;
  int m = 0;
  PolyMatrixField P, P_inv;
};

bool gauge_valid(const GaugeTransform& g, const Vec& lo, const Vec& hi, double tol = 1e-9);

// A'^i = P A^i P^-1,  B' = P B P^-1 + sum_i P A^i d_i(P^-1).
OperatorSpec apply_gauge(const OperatorSpec& op, const GaugeTransform& g);

// y = L x + c with L invertible.
struct AffineDiffeo {
  Mat L;
  Vec c;
};

// Pushforward to y-coordinates; the new chart is the bounding box of the
// image of the old one.
OperatorSpec apply_affine_diffeo(const OperatorSpec& op, const AffineDiffeo& phi);

// Assemble the operator with principal symbol `sigma`, connection forms
// `omega` and subsymbol `sigma0`:  B = sigma0 + sum_i sigma^i omega_i.
OperatorSpec compose_operator(const Vec& lo, const Vec& hi,
                              const std::vector<PolyMatrixField>& sigma,
                              const std::vector<PolyMatrixField>& omega,
                              const PolyMatrixField& sigma0);

PolyMatrixField random_poly_matrix(Rng& rng, int n, int rows, int cols, int degree,
                                   double scale = 1.0);
OperatorSpec random_operator(Rng& rng, int n, int m, int degree);

// Retries random_operator until the symbol is in general position at the
// chart center.
OperatorSpec random_regular_operator(Rng& rng, int n, int m, int degree,
                                     const Tolerances& tol = {}, int max_tries = 64);

// P = C (I + N) with C a constant invertible matrix and N strictly upper
// triangular with polynomial entries; the inverse is again polynomial.
GaugeTransform random_gauge(Rng& rng, int n, int m, int degree);

}  // namespace opgeom
