#include "opgeom/connection.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace opgeom {

Jet2 jet_partial(const Jet2& a, int i) {
  const int n = a.dim();
  Jet2 r(n);
  r.v = a.g(i);
  r.g = a.h.row(i).transpose();
  return r;
}

JetMat jet_partial(const JetMat& a, int i) {
  JetMat r = JetMat::zero(a.rows(), a.cols(), a.n);
  r.v = a.grad(i);
  for (int j = 0; j < a.n; ++j) r.grad(j) = a.hess(i, j);
  return r;
}

Jet2 entry_partial(const JetMat& a, int r, int c, int i) {
  Jet2 e(a.n);
  e.v = a.grad(i)(r, c);
  for (int j = 0; j < a.n; ++j) e.g(j) = a.hess(i, j)(r, c);
  return e;
}

ChristoffelJets levi_civita(const MetricJets& mj) {
  const int n = static_cast<int>(mj.g.rows());
  // metric on vectors is the inverse trace form; the trace form itself raises
  const JetMat& G = mj.g_inv;
  const JetMat& Graise = mj.g;

  ChristoffelJets cj;
  cj.n = n;
  cj.gamma.assign(static_cast<size_t>(n) * n * n, Jet2(n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet2 acc(n);
        for (int l = 0; l < n; ++l) {
          Jet2 t = entry_partial(G, j, l, i) + entry_partial(G, i, l, j) -
                   entry_partial(G, i, j, l);
          acc = acc + Graise.entry(k, l) * t;
        }
        acc = 0.5 * acc;
        clamp_to_order1(acc);
        cj.at(k, i, j) = acc;
        cj.at(k, j, i) = acc;
      }
  return cj;
}

std::vector<JetMat> cov_diff_sigma(const SymbolJets& s, const std::vector<JetMat>& omega,
                                   const ChristoffelJets& gamma) {
  const int n = s.n;
  std::vector<JetMat> c(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      JetMat cij = jet_partial(s.sigma[i], j) + jet_commutator(omega[j], s.sigma[i]);
      for (int k = 0; k < n; ++k) cij = cij + gamma.at(i, j, k) * s.sigma[k];
      clamp_to_order1(cij);
      c[i * n + j] = cij;
    }
  return c;
}

Mat cov_trace(const std::vector<JetMat>& c, int n) {
  Mat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = c[i * n + j].v.trace();
  return d;
}

Mat commutant_gram(const SymbolPoint& s) {
  const std::vector<Mat> sl = sl_basis(s.m);
  const int K = static_cast<int>(sl.size());
  Mat gram = Mat::Zero(K, K);
  for (int k = 0; k < K; ++k)
    for (int l = k; l < K; ++l) {
      double v = 0;
      for (int i = 0; i < s.n; ++i) {
        Mat ck = sl[k] * s.sigma[i] - s.sigma[i] * sl[k];
        Mat cl = sl[l] * s.sigma[i] - s.sigma[i] * sl[l];
        v += (ck.transpose() * cl).trace();
      }
      gram(k, l) = v;
      gram(l, k) = v;
    }
  return gram;
}

MinimalConnection minimal_connection(const SymbolJets& s, const ChristoffelJets& gamma,
                                     double gram_tol) {
  const int n = s.n, m = s.m;
  const std::vector<Mat> sl = sl_basis(m);
  const int K = static_cast<int>(sl.size());
  const int N = n * K;
  MinimalConnection mc;

  Eigen::SelfAdjointEigenSolver<Mat> ges(commutant_gram(s.value()));
  const double gmax = ges.eigenvalues().cwiseAbs().maxCoeff();
  mc.gram_min_eig = gmax > 0 ? ges.eigenvalues().minCoeff() / gmax : 0.0;
  if (mc.gram_min_eig < gram_tol) {
    mc.diagnostic = "SingularGram";
    return mc;
  }

  std::vector<JetMat> zero_omega(n, JetMat::constant(Mat::Zero(m, m), n));
  std::vector<JetMat> c0 = cov_diff_sigma(s, zero_omega, gamma);

  std::vector<std::vector<JetMat>> comm(K, std::vector<JetMat>(n));
  for (int k = 0; k < K; ++k) {
    JetMat bk = JetMat::constant(sl[k], n);
    for (int j = 0; j < n; ++j) comm[k][j] = jet_commutator(bk, s.sigma[j]);
  }

  // row (jh, l): sum_j Tr((c0[jh,j] + [alpha_j, sigma_jh]) [b_l, sigma_j]) = 0
  JetMat G = JetMat::zero(N, N, n);
  JetMat rhs = JetMat::zero(N, 1, n);
  for (int jh = 0; jh < n; ++jh)
    for (int l = 0; l < K; ++l) {
      const int row = jh * K + l;
      Jet2 r(n);
      for (int j = 0; j < n; ++j) r = r + jet_trace(c0[jh * n + j] * comm[l][j]);
      rhs.set_entry(row, 0, -1.0 * r);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < K; ++k)
          G.set_entry(row, j * K + k, jet_trace(comm[k][jh] * comm[l][j]));
    }

  Eigen::SelfAdjointEigenSolver<Mat> saes(G.v);
  const double amax = saes.eigenvalues().cwiseAbs().maxCoeff();
  const double amin = saes.eigenvalues().cwiseAbs().minCoeff();
  mc.galerkin_min_abs_eig = amax > 0 ? amin / amax : 0.0;
  if (mc.galerkin_min_abs_eig < 1e-12) {
    mc.diagnostic = "SingularGram";
    return mc;
  }

  JetMat X = jet_linsolve(G, rhs);
  mc.alpha.assign(n, JetMat());
  for (int j = 0; j < n; ++j) {
    JetMat aj = JetMat::zero(m, m, n);
    for (int k = 0; k < K; ++k) aj = aj + X.entry(j * K + k, 0) * JetMat::constant(sl[k], n);
    clamp_to_order1(aj);
    mc.alpha[j] = aj;
  }

  // stationarity defect at the value level, relative to the system scale
  double worst = 0;
  for (int jh = 0; jh < n; ++jh)
    for (int l = 0; l < K; ++l) {
      double e = 0;
      for (int j = 0; j < n; ++j) {
        Mat u = c0[jh * n + j].v + mc.alpha[j].v * s.sigma[jh].v - s.sigma[jh].v * mc.alpha[j].v;
        e += (u * comm[l][j].v).trace();
      }
      worst = std::max(worst, std::abs(e));
    }
  mc.residual = worst / std::max(1.0, G.v.cwiseAbs().maxCoeff());
  mc.ok = true;
  return mc;
}

AssociatedConnection associated_connection(const SymbolJets& s, const JetMat& b,
                                           const MetricJets& mj, const Tolerances& tol) {
  const int n = s.n, m = s.m;
  AssociatedConnection ac;
  if (!mj.pt.nondegenerate) {
    ac.diagnostic = "DegenerateMetric";
    return ac;
  }
  ChristoffelJets gamma = levi_civita(mj);
  ac.minimal = minimal_connection(s, gamma, tol.tol_det_base);
  if (!ac.minimal.ok) {
    ac.diagnostic = ac.minimal.diagnostic;
    return ac;
  }

  JetMat s0min = b;
  for (int i = 0; i < n; ++i) s0min = s0min - s.sigma[i] * ac.minimal.alpha[i];
  clamp_to_order1(s0min);

  JetMat rhs = JetMat::zero(n, 1, n);
  for (int k = 0; k < n; ++k) rhs.set_entry(k, 0, jet_trace(s0min * s.sigma[k]));
  ac.lambda = jet_linsolve(mj.g, rhs);
  // two refinement passes keep the orthogonality defect near machine level
  // even when g is poorly conditioned
  for (int pass = 0; pass < 2; ++pass)
    ac.lambda = ac.lambda + jet_linsolve(mj.g, rhs - mj.g * ac.lambda);
  clamp_to_order1(ac.lambda);

  ac.omega.assign(n, JetMat());
  for (int j = 0; j < n; ++j) {
    JetMat oj = ac.minimal.alpha[j] + ac.lambda.entry(j, 0) * JetMat::identity(m, n);
    clamp_to_order1(oj);
    ac.omega[j] = oj;
  }

  JetMat s0 = b;
  for (int i = 0; i < n; ++i) s0 = s0 - s.sigma[i] * ac.omega[i];
  clamp_to_order1(s0);
  ac.sigma0 = s0;

  double worst = 0;
  for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs((s0.v * s.sigma[k].v).trace()));
  ac.residual = worst;
  ac.ok = true;
  return ac;
}

CurvatureResult curvature(const std::vector<JetMat>& omega) {
  const int n = static_cast<int>(omega.size());
  const int m = omega.empty() ? 0 : omega[0].rows();
  CurvatureResult cr;
  cr.R.assign(static_cast<size_t>(n) * n, Mat::Zero(m, m));
  cr.R0 = cr.R;
  cr.ch = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat r = omega[j].grad(i) - omega[i].grad(j) + omega[i].v * omega[j].v -
              omega[j].v * omega[i].v;
      cr.R[i * n + j] = r;
      cr.ch(i, j) = r.trace();
      cr.R0[i * n + j] = r - (cr.ch(i, j) / m) * Mat::Identity(m, m);
    }
  return cr;
}

Mat chern_in_frame(const Mat& ch, const CoframePoint& cf) {
  return cf.frame.transpose() * ch * cf.frame;
}

}  // namespace opgeom
