#include "opgeom/pipeline.hpp"

namespace opgeom {

std::vector<TrackedWord> tracked_invariants(int n, int m) {
  std::vector<TrackedWord> out;
  auto push = [&](const std::vector<LabeledWord>& ws) {
    for (const auto& lw : ws) {
      TrackedWord tw;
      tw.label = lw.label;
      tw.word = lw.word;
      for (int letter : lw.word.letters) {
        if (letter == 0) tw.uses_sigma0 = true;
        if (letter == 2) tw.parity ^= 1;
      }
      out.push_back(std::move(tw));
    }
  };
  push(basic_invariant_candidates(n, m));
  push(subsymbol_invariant_words(n, m));
  return out;
}

PointEval evaluate_point(const OperatorSpec& op, const Vec& x, const Tolerances& tol) {
  PointEval pe;
  pe.x = x;
  SymbolJets sj = symbol_at(op, x);
  pe.reg = general_position(sj.value(), tol);
  if (!pe.reg.general) {
    pe.diagnostic = pe.reg.diagnostic.empty() ? "symbol not in general position" : pe.reg.diagnostic;
    return pe;
  }
  MetricJets mj = metric_g(sj, tol);
  pe.metric = mj.pt;
  CoframeJets cf = invariant_coframe(sj, tol);
  pe.coframe = cf.pt;
  if (!cf.pt.ok) {
    pe.diagnostic = cf.pt.diagnostic;
    return pe;
  }
  SymbolJets dec = frame_decompose(sj, cf);
  pe.decomposed = dec.value();

  pe.conn = associated_connection(sj, b_at(op, x), mj, tol);
  if (!pe.conn.ok) {
    pe.diagnostic = pe.conn.diagnostic;
    return pe;
  }
  pe.curv = curvature(pe.conn.omega);
  pe.ch_frame = chern_in_frame(pe.curv.ch, cf.pt);

  std::vector<JetMat> mats(static_cast<size_t>(op.n) + 1);
  mats[0] = pe.conn.sigma0;
  for (int k = 0; k < op.n; ++k) mats[k + 1] = dec.sigma[k];
  for (const TrackedWord& tw : tracked_invariants(op.n, op.m)) {
    Jet2 j = trace_word_eval(tw.word, mats);
    clamp_to_order1(j);
    pe.values.push_back(j.v);
    pe.jets.push_back(std::move(j));
  }
  pe.ok = true;
  return pe;
}

Mat invariant_jacobian(const PointEval& pe, const std::vector<int>& idx) {
  const int n = static_cast<int>(pe.x.size());
  Mat j(static_cast<int>(idx.size()), n);
  for (size_t r = 0; r < idx.size(); ++r) j.row(static_cast<int>(r)) = pe.jets[idx[r]].g.transpose();
  return j;
}

Mat chern_pushforward(const PointEval& pe, const std::vector<int>& idx) {
  Mat jinv = invariant_jacobian(pe, idx).inverse();
  return jinv.transpose() * pe.curv.ch * jinv;
}

}  // namespace opgeom
