#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opgeom/jets.hpp"
#include "opgeom/trace_words.hpp"

namespace opgeom {

// Pointwise symbol: sigma[i] is the m x m coefficient of the i-th chart
// direction, i = 0..n-1.
struct SymbolPoint {
  int n = 0, m = 0;
  std::vector<Mat> sigma;
};

struct SymbolJets {
  int n = 0, m = 0;
  std::vector<JetMat> sigma;
  SymbolPoint value() const;
};

Mat symbol_contract(const SymbolPoint& s, const Vec& theta);
JetMat symbol_contract(const SymbolJets& s, const Vec& theta);

struct Tolerances {
  double tol_det_base = 1e-10;  // scaled by max|g_ij|^n
  double tol_cond = 1e8;
  double tol_disc = 1e-10;
  double tol_zeta = 1e-10;
  double tol_chi = 1e-10;
  int sphere_samples = 64;
  std::uint64_t seed = 20240915;
};

struct MetricPoint {
  Mat g;       // g^{ij} = Tr(sigma_i sigma_j)
  Mat g_inv;
  Vec chi;     // chi^i = Tr sigma_i
  Vec chi_hat; // g_inv * chi
  double det_g = 0;
  double cond = 0;
  double pairing = 0;  // <chi_hat, chi> = chi^T g_inv chi
  int sig_pos = 0, sig_neg = 0;
  bool nondegenerate = false;
};

struct MetricJets {
  JetMat g, g_inv;
  JetMat chi, chi_hat;  // n x 1
  MetricPoint pt;
};

Vec chi_vector(const SymbolPoint& s);
MetricPoint metric_g(const SymbolPoint& s, const Tolerances& tol = {});
MetricJets metric_g(const SymbolJets& s, const Tolerances& tol = {});

// cubic trace forms, component layout t[i](j,k)
struct HTensors {
  std::vector<Mat> h1, h2, hs, ha;
};
HTensors h_tensors(const SymbolPoint& s);
// hs contracted with a covector in the third slot
Mat h_tilde(const HTensors& h, const Vec& chi_hat);

struct CoframePoint {
  bool ok = false;
  bool m2_branch = false;
  double cond = 0;
  double m2_norm_sign = 1;  // sign of g^{-1}(v,v) for the m=2 complement
  Mat estar;                // rows are the coframe covectors e*_i
  Mat frame;                // columns are the dual frame vectors e_i
  std::string diagnostic;
};

struct CoframeJets {
  CoframePoint pt;
  JetMat estar, frame;
};

CoframePoint invariant_coframe(const SymbolPoint& s, const Tolerances& tol = {});
CoframeJets invariant_coframe(const SymbolJets& s, const Tolerances& tol = {});

// discriminant of the characteristic polynomial (squared eigenvalue gaps)
double char_discriminant(const Mat& a);

struct VarietyReport {
  bool proper = false;
  int off_count = 0;
  double max_abs_disc = 0;
};
VarietyReport sigma_variety_proper(const SymbolPoint& s, const Tolerances& tol = {});

struct ZetaReport {
  bool nonvanishing = false;
  bool enough_samples = false;
  int off_count = 0;
  double min_max_component = 0;
};
ZetaReport zeta_nonvanishing(const SymbolPoint& s, const HTensors& h, const Tolerances& tol = {});

struct RegularityReport {
  int n = 0, m = 0;
  bool dims_ok = false;
  bool chi_nonzero = false;
  bool g_nondegenerate = false;
  bool coframe_independent = false;
  bool sigma_proper = false;
  bool zeta_ok = false;     // m >= 3 branch
  bool pairing_ok = false;  // m = 2 branch
  bool general = false;
  double chi_norm = 0, det_g = 0, cond = 0, pairing = 0, max_abs_disc = 0;
  std::string diagnostic;
};
RegularityReport general_position(const SymbolPoint& s, const Tolerances& tol = {});

// components of the symbol in the invariant frame
SymbolPoint frame_decompose(const SymbolPoint& s, const CoframePoint& cf);
SymbolJets frame_decompose(const SymbolJets& s, const CoframeJets& cf);

struct LabeledWord {
  std::string label;
  TraceWord word;
};
std::vector<LabeledWord> basic_invariant_candidates(int n, int m);
std::vector<LabeledWord> subsymbol_invariant_words(int n, int m);

// every deduped word up to max_len (default 2^m - 1) over the decomposed
// components, with letter 0 bound to sigma0 when present
std::vector<std::pair<std::string, double>> invariant_vector(const SymbolPoint& decomposed,
                                                             const Mat* sigma0, int max_len = -1);

long orbit_codimension(int n, int m);

struct CodimCheck {
  long expected = 0;
  int numeric = 0;
  int rank = 0;
};
CodimCheck verify_codimension(const SymbolPoint& s, double rank_tol_rel = 1e-8);

// smallest singular value (relative to largest) of beta -> ([beta, sigma_i])_i
// over traceless beta; positive iff the commutant is scalar
double commutant_min_singular_value(const SymbolPoint& s);

std::vector<Mat> sl_basis(int m);

std::vector<Vec> unit_sphere_samples(int n, int count, std::uint64_t seed);

// self-contained deterministic generator for test suites
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64();
  double uniform(double lo, double hi);
  double normal();
};

SymbolPoint random_symbol(int n, int m, Rng& rng, double scale = 1.0);
SymbolPoint random_general_symbol(int n, int m, Rng& rng, const Tolerances& tol = {},
                                  int max_tries = 500);

}  // namespace opgeom
