#pragma once

#include <string>
#include <vector>

#include "opgeom/symbol.hpp"

namespace opgeom {

// d/dx_i of a jet: value <- grad(i), grad(j) <- hess(i,j), hess <- 0.
// The result is valid through first derivatives only.
Jet2 jet_partial(const Jet2& a, int i);
JetMat jet_partial(const JetMat& a, int i);
Jet2 entry_partial(const JetMat& a, int r, int c, int i);

// Christoffel symbols of the metric (g^{ij})^{-1} on the tangent bundle.
// Stored flat, Gamma^k_{ij} at (k*n+i)*n+j; symmetric in (i,j) exactly;
// entries valid through first derivatives.
struct ChristoffelJets {
  int n = 0;
  std::vector<Jet2> gamma;
  const Jet2& at(int k, int i, int j) const { return gamma[(k * n + i) * n + j]; }
  Jet2& at(int k, int i, int j) { return gamma[(k * n + i) * n + j]; }
};

ChristoffelJets levi_civita(const MetricJets& mj);

// nabla_j sigma^i = d_j sigma^i + [omega_j, sigma^i] + Gamma^i_{jk} sigma^k,
// laid out c[i*n+j]; valid through first derivatives.
std::vector<JetMat> cov_diff_sigma(const SymbolJets& s, const std::vector<JetMat>& omega,
                                   const ChristoffelJets& gamma);

// D(i,j) = Tr(c[i*n+j]) at the point; independent of omega.
Mat cov_trace(const std::vector<JetMat>& c, int n);

// Gram matrix of beta -> ([beta, sigma_i])_i over the traceless basis in the
// Frobenius inner product; positive definite iff the commutant is scalar.
Mat commutant_gram(const SymbolPoint& s);

struct MinimalConnection {
  bool ok = false;
  std::vector<JetMat> alpha;        // traceless forms, 1-jets
  double residual = 0;              // stationarity defect of the solved system
  double gram_min_eig = 0;          // commutant Gram lambda_min/lambda_max
  double galerkin_min_abs_eig = 0;  // projected system min|eig|/max|eig|
  std::string diagnostic;
};

// Traceless alpha making d sigma + [alpha, sigma] orthogonal to every
// [beta, sigma] direction in the Tr x Tr pairing; square n(m^2-1) system.
MinimalConnection minimal_connection(const SymbolJets& s, const ChristoffelJets& gamma,
                                     double gram_tol = 1e-10);

struct AssociatedConnection {
  bool ok = false;
  MinimalConnection minimal;
  std::vector<JetMat> omega;  // alpha_j + lambda_j id, 1-jets
  JetMat lambda;              // n x 1, 1-jet
  JetMat sigma0;              // subsymbol in this connection, 1-jet
  double residual = 0;        // max_k |Tr(sigma0 sigma_k)|
  std::string diagnostic;
};

// Normalizes the minimal connection so the subsymbol is trace-orthogonal to
// every symbol contraction: solve g lambda = Tr(sigma0_min sigma_k).
AssociatedConnection associated_connection(const SymbolJets& s, const JetMat& b,
                                           const MetricJets& mj, const Tolerances& tol = {});

struct CurvatureResult {
  std::vector<Mat> R;   // R_ij = d_i omega_j - d_j omega_i + [omega_i, omega_j], i*n+j
  std::vector<Mat> R0;  // R_ij - (ch_ij/m) id
  Mat ch;               // ch_ij = Tr R_ij
};

CurvatureResult curvature(const std::vector<JetMat>& omega);

// ch contracted with frame vector pairs, chf_ij = e_i^T ch e_j
Mat chern_in_frame(const Mat& ch, const CoframePoint& cf);

}  // namespace opgeom
