#include "opgeom/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>

namespace opgeom {

SymbolPoint SymbolJets::value() const {
  SymbolPoint p;
  p.n = n;
  p.m = m;
  p.sigma.reserve(sigma.size());
  for (const auto& s : sigma) p.sigma.push_back(s.v);
  return p;
}

Mat symbol_contract(const SymbolPoint& s, const Vec& theta) {
  Mat r = Mat::Zero(s.m, s.m);
  for (int i = 0; i < s.n; ++i) r += theta(i) * s.sigma[i];
  return r;
}

JetMat symbol_contract(const SymbolJets& s, const Vec& theta) {
  JetMat r = JetMat::zero(s.m, s.m, s.sigma[0].n);
  for (int i = 0; i < s.n; ++i) r = r + theta(i) * s.sigma[i];
  return r;
}

Vec chi_vector(const SymbolPoint& s) {
  Vec chi(s.n);
  for (int i = 0; i < s.n; ++i) chi(i) = s.sigma[i].trace();
  return chi;
}

namespace {

MetricPoint metric_from_values(const Mat& g, const Vec& chi, const Tolerances& tol) {
  MetricPoint mp;
  mp.g = g;
  mp.chi = chi;
  const int n = static_cast<int>(g.rows());
  const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
  mp.det_g = g.determinant();
  Eigen::JacobiSVD<Mat> svd(g);
  const double smin = svd.singularValues()(n - 1);
  const double smax = svd.singularValues()(0);
  mp.cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  const double tol_det = tol.tol_det_base * std::pow(scale, n);
  mp.nondegenerate = std::abs(mp.det_g) > tol_det && mp.cond < tol.tol_cond;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (g + g.transpose()));
  for (int i = 0; i < n; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > 1e-12 * scale)
      ++mp.sig_pos;
    else if (ev < -1e-12 * scale)
      ++mp.sig_neg;
  }
  if (mp.nondegenerate) {
    mp.g_inv = g.inverse();
    mp.chi_hat = mp.g_inv * chi;
    mp.pairing = chi.dot(mp.chi_hat);
  } else {
    mp.g_inv = Mat::Zero(n, n);
    mp.chi_hat = Vec::Zero(n);
    mp.pairing = 0;
  }
  return mp;
}

}  // namespace

MetricPoint metric_g(const SymbolPoint& s, const Tolerances& tol) {
  Mat g(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = i; j < s.n; ++j) {
      g(i, j) = (s.sigma[i] * s.sigma[j]).trace();
      g(j, i) = g(i, j);
    }
  return metric_from_values(g, chi_vector(s), tol);
}

MetricJets metric_g(const SymbolJets& s, const Tolerances& tol) {
  const int n = s.n;
  const int nj = s.sigma[0].n;
  MetricJets mj;
  mj.g = JetMat::zero(n, n, nj);
  mj.chi = JetMat::zero(n, 1, nj);
  for (int i = 0; i < n; ++i) {
    mj.chi.set_entry(i, 0, jet_trace(s.sigma[i]));
    for (int j = i; j < n; ++j) {
      const Jet2 e = jet_trace(s.sigma[i] * s.sigma[j]);
      mj.g.set_entry(i, j, e);
      if (j != i) mj.g.set_entry(j, i, e);
    }
  }
  mj.pt = metric_from_values(mj.g.v, mj.chi.v.col(0), tol);
  if (mj.pt.nondegenerate) {
    mj.g_inv = jet_matinv(mj.g);
    mj.chi_hat = jet_linsolve(mj.g, mj.chi);
  } else {
    mj.g_inv = JetMat::zero(n, n, nj);
    mj.chi_hat = JetMat::zero(n, 1, nj);
  }
  return mj;
}

HTensors h_tensors(const SymbolPoint& s) {
  const int n = s.n;
  HTensors h;
  h.h1.assign(n, Mat::Zero(n, n));
  h.h2.assign(n, Mat::Zero(n, n));
  h.hs.assign(n, Mat::Zero(n, n));
  h.ha.assign(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Mat pij = s.sigma[i] * s.sigma[j];
      const Mat pji = s.sigma[j] * s.sigma[i];
      for (int k = 0; k < n; ++k) {
        h.h1[i](j, k) = (pij * s.sigma[k]).trace();
        h.h2[i](j, k) = (pji * s.sigma[k]).trace();
        h.hs[i](j, k) = 0.5 * (h.h1[i](j, k) + h.h2[i](j, k));
        h.ha[i](j, k) = 0.5 * (h.h1[i](j, k) - h.h2[i](j, k));
      }
    }
  return h;
}

Mat h_tilde(const HTensors& h, const Vec& chi_hat) {
  const int n = static_cast<int>(h.hs.size());
  Mat t = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = h.hs[i].row(j).dot(chi_hat);
  return t;
}

namespace {

double matrix_cond(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  return smin > 0 ? svd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

CoframeJets invariant_coframe(const SymbolJets& s, const Tolerances& tol) {
  const int n = s.n;
  const int nj = s.sigma[0].n;
  CoframeJets cf;
  cf.estar = JetMat::zero(n, n, nj);
  cf.frame = JetMat::zero(n, n, nj);
  const MetricJets mj = metric_g(s, tol);
  if (!mj.pt.nondegenerate) {
    cf.pt.diagnostic = "metric degenerate";
    return cf;
  }
  if (mj.pt.chi.norm() <= tol.tol_chi) {
    cf.pt.diagnostic = "chi vanishes";
    return cf;
  }
  if (s.m >= 3) {
    // coframe chain: e*_1 = chi_hat, e*_{k+1} = g^{-1} h~ e*_k
    JetMat htilde = JetMat::zero(n, n, nj);
    std::vector<JetMat> prod(static_cast<size_t>(n) * n, JetMat());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) prod[i * n + j] = s.sigma[i] * s.sigma[j];
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet2 e(nj);
        for (int k = 0; k < n; ++k) {
          const Jet2 hs_ijk =
              0.5 * (jet_trace(prod[i * n + j] * s.sigma[k]) + jet_trace(prod[j * n + i] * s.sigma[k]));
          e = e + hs_ijk * mj.chi_hat.entry(k, 0);
        }
        htilde.set_entry(i, j, e);
        if (j != i) htilde.set_entry(j, i, e);
      }
    const JetMat hhat = jet_linsolve(mj.g, htilde);
    JetMat col = mj.chi_hat;  // n x 1
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) cf.estar.set_entry(k, i, col.entry(i, 0));
      if (k + 1 < n) col = hhat * col;
    }
  } else {
    cf.pt.m2_branch = true;
    if (n != 2) {
      cf.pt.diagnostic = "m=2 frame construction requires n=2";
      return cf;
    }
    if (std::abs(mj.pt.pairing) <= tol.tol_chi) {
      cf.pt.diagnostic = "m=2 branch: <chi_hat, chi> vanishes";
      return cf;
    }
    // frame: e_1 = chi, e_2 the g^{-1}-unit vector g^{-1}-orthogonal to e_1
    JetMat v = JetMat::zero(2, 1, nj);
    v.set_entry(0, 0, -1.0 * mj.chi_hat.entry(1, 0));
    v.set_entry(1, 0, mj.chi_hat.entry(0, 0));
    Jet2 q(nj);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q = q + v.entry(i, 0) * mj.g_inv.entry(i, j) * v.entry(j, 0);
    if (std::abs(q.v) < 1e-14 * std::max(1.0, mj.pt.cond)) {
      cf.pt.diagnostic = "m=2 branch: null complement direction";
      return cf;
    }
    cf.pt.m2_norm_sign = q.v > 0 ? 1.0 : -1.0;
    const Jet2 scale = jet_inv(jet_sqrt(cf.pt.m2_norm_sign * q));
    JetMat e2 = JetMat::zero(2, 1, nj);
    e2.set_entry(0, 0, scale * v.entry(0, 0));
    e2.set_entry(1, 0, scale * v.entry(1, 0));
    const double det = mj.chi.v(0, 0) * e2.v(1, 0) - mj.chi.v(1, 0) * e2.v(0, 0);
    if (det == 0.0) {
      cf.pt.diagnostic = "m=2 branch: degenerate frame";
      return cf;
    }
    if (det < 0) e2 = -1.0 * e2;
    for (int i = 0; i < 2; ++i) {
      cf.frame.set_entry(i, 0, mj.chi.entry(i, 0));
      cf.frame.set_entry(i, 1, e2.entry(i, 0));
    }
    cf.estar = jet_matinv(cf.frame);
  }
  if (s.m >= 3) {
    cf.pt.cond = matrix_cond(cf.estar.v);
    if (!std::isfinite(cf.pt.cond) || cf.pt.cond >= tol.tol_cond) {
      cf.pt.diagnostic = "coframe chain not independent";
      return cf;
    }
    cf.frame = jet_matinv(cf.estar);
  } else {
    cf.pt.cond = matrix_cond(cf.frame.v);
    if (!std::isfinite(cf.pt.cond) || cf.pt.cond >= tol.tol_cond) {
      cf.pt.diagnostic = "m=2 frame ill conditioned";
      return cf;
    }
  }
  cf.pt.ok = true;
  cf.pt.estar = cf.estar.v;
  cf.pt.frame = cf.frame.v;
  return cf;
}

CoframePoint invariant_coframe(const SymbolPoint& s, const Tolerances& tol) {
  SymbolJets sj;
  sj.n = s.n;
  sj.m = s.m;
  for (const auto& m : s.sigma) sj.sigma.push_back(JetMat::constant(m, s.n));
  return invariant_coframe(sj, tol).pt;
}

double char_discriminant(const Mat& a) {
  Eigen::EigenSolver<Mat> es(a, false);
  const auto ev = es.eigenvalues();
  std::complex<double> disc(1.0, 0.0);
  for (int i = 0; i < ev.size(); ++i)
    for (int j = i + 1; j < ev.size(); ++j) {
      const std::complex<double> d = ev(i) - ev(j);
      disc *= d * d;
    }
  return disc.real();
}

VarietyReport sigma_variety_proper(const SymbolPoint& s, const Tolerances& tol) {
  VarietyReport r;
  for (const Vec& theta : unit_sphere_samples(s.n, tol.sphere_samples, tol.seed)) {
    const double d = std::abs(char_discriminant(symbol_contract(s, theta)));
    r.max_abs_disc = std::max(r.max_abs_disc, d);
    if (d > tol.tol_disc) ++r.off_count;
  }
  r.proper = r.off_count > 0;
  return r;
}

ZetaReport zeta_nonvanishing(const SymbolPoint& s, const HTensors& h, const Tolerances& tol) {
  ZetaReport r;
  r.min_max_component = std::numeric_limits<double>::infinity();
  bool all_nonzero = true;
  for (const Vec& theta : unit_sphere_samples(s.n, tol.sphere_samples, tol.seed)) {
    if (std::abs(char_discriminant(symbol_contract(s, theta))) <= tol.tol_disc) continue;
    ++r.off_count;
    double mx = 0;
    for (int i = 0; i < s.n; ++i)
      for (int j = 0; j < s.n; ++j) {
        double z = 0;
        for (int k = 0; k < s.n; ++k) z += h.ha[i](j, k) * theta(k);
        mx = std::max(mx, std::abs(z));
      }
    r.min_max_component = std::min(r.min_max_component, mx);
    if (mx <= tol.tol_zeta) all_nonzero = false;
  }
  r.enough_samples = r.off_count >= tol.sphere_samples / 2;
  r.nonvanishing = r.enough_samples && all_nonzero && r.off_count > 0;
  return r;
}

RegularityReport general_position(const SymbolPoint& s, const Tolerances& tol) {
  RegularityReport r;
  r.n = s.n;
  r.m = s.m;
  r.dims_ok = s.m >= 2 && s.n >= 1 && s.n <= s.m * s.m;
  if (!r.dims_ok) {
    r.diagnostic = "dimension constraint n <= m^2 violated (or m < 2)";
    return r;
  }
  const MetricPoint mp = metric_g(s, tol);
  r.chi_norm = mp.chi.norm();
  r.chi_nonzero = r.chi_norm > tol.tol_chi;
  r.det_g = mp.det_g;
  r.g_nondegenerate = mp.nondegenerate;
  r.pairing = mp.pairing;
  const VarietyReport vr = sigma_variety_proper(s, tol);
  r.sigma_proper = vr.proper;
  r.max_abs_disc = vr.max_abs_disc;
  if (!r.chi_nonzero || !r.g_nondegenerate) {
    r.diagnostic = !r.chi_nonzero ? "chi vanishes" : "metric degenerate";
    return r;
  }
  const CoframePoint cf = invariant_coframe(s, tol);
  r.coframe_independent = cf.ok;
  r.cond = cf.cond;
  if (s.m >= 3) {
    // The antisymmetric cubic pairing is a totally antisymmetric 3-tensor
    // (trace cyclicity), hence identically zero for n = 2: the condition only
    // discriminates for n >= 3 and is vacuous below that.
    r.zeta_ok = s.n <= 2 || zeta_nonvanishing(s, h_tensors(s), tol).nonvanishing;
    r.general = r.chi_nonzero && r.g_nondegenerate && r.coframe_independent && r.sigma_proper && r.zeta_ok;
    if (!r.general) r.diagnostic = cf.ok ? (r.sigma_proper ? "zeta vanishes off the variety" : "symbol variety fills the cotangent space") : cf.diagnostic;
  } else {
    r.pairing_ok = std::abs(mp.pairing) > tol.tol_chi;
    r.general = r.chi_nonzero && r.g_nondegenerate && r.pairing_ok && r.sigma_proper && r.coframe_independent;
    if (!r.general)
      r.diagnostic = !r.pairing_ok ? "m=2 branch: <chi_hat, chi> vanishes"
                                   : (!r.sigma_proper ? "symbol variety fills the cotangent space" : cf.diagnostic);
  }
  return r;
}

SymbolPoint frame_decompose(const SymbolPoint& s, const CoframePoint& cf) {
  SymbolPoint d;
  d.n = s.n;
  d.m = s.m;
  d.sigma.assign(s.n, Mat::Zero(s.m, s.m));
  for (int i = 0; i < s.n; ++i)
    for (int k = 0; k < s.n; ++k) d.sigma[i] += cf.estar(i, k) * s.sigma[k];
  return d;
}

SymbolJets frame_decompose(const SymbolJets& s, const CoframeJets& cf) {
  SymbolJets d;
  d.n = s.n;
  d.m = s.m;
  const int nj = s.sigma[0].n;
  d.sigma.assign(s.n, JetMat::zero(s.m, s.m, nj));
  for (int i = 0; i < s.n; ++i)
    for (int k = 0; k < s.n; ++k) d.sigma[i] = d.sigma[i] + cf.estar.entry(i, k) * s.sigma[k];
  return d;
}

namespace {

void push_unique(std::vector<LabeledWord>& out, std::set<TraceWord>& seen, TraceWord w) {
  w = canonical_form(w);
  if (seen.insert(w).second) out.push_back({word_label(w), w});
}

TraceWord powers(std::initializer_list<std::pair<int, int>> groups) {
  TraceWord w;
  for (const auto& [letter, count] : groups)
    for (int i = 0; i < count; ++i) w.letters.push_back(letter);
  return w;
}

}  // namespace

std::vector<LabeledWord> basic_invariant_candidates(int n, int m) {
  std::vector<LabeledWord> out;
  std::set<TraceWord> seen;
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= m; ++i) push_unique(out, seen, powers({{k, i}}));
  for (int k = 2; k <= n; ++k)
    for (int i = 1; i <= m - 1; ++i)
      for (int j = 1; j <= m - 1; ++j) push_unique(out, seen, powers({{1, i}, {k, j}}));
  for (int k = 3; k <= n; ++k)
    for (int j = 1; j <= m - 1; ++j) push_unique(out, seen, powers({{1, 1}, {2, 1}, {k, j}}));
  return out;
}

std::vector<LabeledWord> subsymbol_invariant_words(int n, int m) {
  std::vector<LabeledWord> out;
  std::set<TraceWord> seen;
  for (int i = 1; i <= m; ++i) push_unique(out, seen, powers({{0, i}}));
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= m - 1; ++i)
      for (int j = 1; j <= m - 1; ++j) push_unique(out, seen, powers({{0, i}, {k, j}}));
  return out;
}

std::vector<std::pair<std::string, double>> invariant_vector(const SymbolPoint& decomposed,
                                                             const Mat* sigma0, int max_len) {
  if (max_len < 0) max_len = (1 << decomposed.m) - 1;
  std::vector<int> letters;
  if (sigma0 != nullptr) letters.push_back(0);
  for (int i = 1; i <= decomposed.n; ++i) letters.push_back(i);
  std::vector<Mat> mats(static_cast<size_t>(decomposed.n) + 1, Mat());
  mats[0] = sigma0 != nullptr ? *sigma0 : Mat::Zero(decomposed.m, decomposed.m);
  for (int i = 0; i < decomposed.n; ++i) mats[i + 1] = decomposed.sigma[i];
  std::vector<std::pair<std::string, double>> out;
  for (const TraceWord& w : enumerate_trace_words(letters, max_len))
    out.emplace_back(word_label(w), trace_word_eval(w, mats));
  return out;
}

long orbit_codimension(int n, int m) {
  return static_cast<long>(n - 1) * (static_cast<long>(m) * m - n - 1);
}

CodimCheck verify_codimension(const SymbolPoint& s, double rank_tol_rel) {
  const int n = s.n, m = s.m;
  const int rows = n * m * m;
  const int cols = m * m + n * n;
  Mat act = Mat::Zero(rows, cols);
  int col = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b, ++col) {
      Mat e = Mat::Zero(m, m);
      e(a, b) = 1.0;
      for (int i = 0; i < n; ++i) {
        const Mat c = e * s.sigma[i] - s.sigma[i] * e;
        act.block(i * m * m, col, m * m, 1) = Eigen::Map<const Vec>(c.data(), m * m);
      }
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l, ++col)
      act.block(k * m * m, col, m * m, 1) = Eigen::Map<const Vec>(s.sigma[l].data(), m * m);
  Eigen::JacobiSVD<Mat> svd(act);
  const double smax = svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rank_tol_rel * smax) ++rank;
  CodimCheck c;
  c.expected = orbit_codimension(n, m);
  c.rank = rank;
  c.numeric = rows - rank;
  return c;
}

double commutant_min_singular_value(const SymbolPoint& s) {
  const int n = s.n, m = s.m;
  const auto basis = sl_basis(m);
  Mat a = Mat::Zero(n * m * m, basis.size());
  for (size_t k = 0; k < basis.size(); ++k)
    for (int i = 0; i < n; ++i) {
      const Mat c = basis[k] * s.sigma[i] - s.sigma[i] * basis[k];
      a.block(i * m * m, k, m * m, 1) = Eigen::Map<const Vec>(c.data(), m * m);
    }
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& sv = svd.singularValues();
  return sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
}

std::vector<Mat> sl_basis(int m) {
  std::vector<Mat> basis;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) {
        Mat e = Mat::Zero(m, m);
        e(i, j) = 1.0;
        basis.push_back(e);
      }
  for (int i = 0; i + 1 < m; ++i) {
    Mat e = Mat::Zero(m, m);
    e(i, i) = 1.0;
    e(i + 1, i + 1) = -1.0;
    basis.push_back(e);
  }
  return basis;
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

double Rng::normal() {
  double u1 = uniform(0.0, 1.0);
  while (u1 <= 1e-300) u1 = uniform(0.0, 1.0);
  const double u2 = uniform(0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::vector<Vec> unit_sphere_samples(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    const double nrm = v.norm();
    if (nrm < 1e-8) continue;
    out.push_back(v / nrm);
  }
  return out;
}

SymbolPoint random_symbol(int n, int m, Rng& rng, double scale) {
  SymbolPoint s;
  s.n = n;
  s.m = m;
  s.sigma.assign(n, Mat::Zero(m, m));
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) s.sigma[i](r, c) = rng.uniform(-scale, scale);
  return s;
}

SymbolPoint random_general_symbol(int n, int m, Rng& rng, const Tolerances& tol, int max_tries) {
  for (int t = 0; t < max_tries; ++t) {
    SymbolPoint s = random_symbol(n, m, rng);
    if (general_position(s, tol).general) return s;
  }
  throw std::runtime_error("random_general_symbol: no general symbol found");
}

}  // namespace opgeom
