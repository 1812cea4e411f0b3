#include "opgeom/model.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

namespace opgeom {

namespace {

double min_singular_value(const Mat& j) {
  Eigen::JacobiSVD<Mat> svd(j);
  return svd.singularValues().minCoeff();
}

double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<PointEval> eval_grid(const OperatorSpec& op, int grid, const Tolerances& tol,
                                 Exec ex) {
  std::vector<Vec> pts = interior_grid(op.lo, op.hi, grid);
  return map_points<PointEval>(
      pts, [&](const Vec& x) { return evaluate_point(op, x, tol); }, ex);
}

InvariantSelection select_from_evals(const std::vector<PointEval>& evals, int n, int m,
                                     double tol_rank) {
  std::vector<const PointEval*> oks;
  for (const auto& pe : evals)
    if (pe.ok) oks.push_back(&pe);
  if (oks.size() * 2 < evals.size())
    throw ModelBuildError(ModelBuildError::Kind::too_few_samples,
                          "regular at " + std::to_string(oks.size()) + " of " +
                              std::to_string(evals.size()) + " grid points");

  const std::vector<TrackedWord> tracked = tracked_invariants(n, m);
  const int T = static_cast<int>(tracked.size());

  // per-candidate gradient scale so selection is unit-independent; the median
  // keeps boundary spikes of a single invariant from deflating its rows at
  // every ordinary grid point
  std::vector<double> scale(T, 0.0);
  for (int c = 0; c < T; ++c) {
    std::vector<double> norms;
    norms.reserve(oks.size());
    for (const PointEval* pe : oks) norms.push_back(pe->jets[c].g.norm());
    std::sort(norms.begin(), norms.end());
    scale[c] = norms[(norms.size() - 1) / 2];
  }
  const double smax = *std::max_element(scale.begin(), scale.end());
  std::vector<bool> alive(T);
  for (int c = 0; c < T; ++c) alive[c] = scale[c] > 1e-12 * std::max(1.0, smax);

  // mean over points of the smallest singular value of the scaled gradients
  // of sel + {c}
  auto joint_score = [&](const std::vector<int>& sel, int c) {
    double acc = 0;
    for (const PointEval* pe : oks) {
      Mat j(static_cast<int>(sel.size()) + 1, n);
      for (size_t r = 0; r < sel.size(); ++r)
        j.row(static_cast<int>(r)) = pe->jets[sel[r]].g.transpose() / scale[sel[r]];
      j.row(static_cast<int>(sel.size())) = pe->jets[c].g.transpose() / scale[c];
      acc += min_singular_value(j);
    }
    return acc / static_cast<double>(oks.size());
  };

  // greedy completion: repeatedly add the candidate whose differential most
  // increases the smallest singular value, averaged over the grid
  auto complete = [&](std::vector<int> sel) {
    while (static_cast<int>(sel.size()) < n) {
      int best = -1;
      double best_score = -1;
      for (int c = 0; c < T; ++c) {
        if (!alive[c] || std::find(sel.begin(), sel.end(), c) != sel.end()) continue;
        const double score = joint_score(sel, c);
        if (score > best_score) {
          best_score = score;
          best = c;
        }
      }
      if (best < 0) return std::vector<int>();
      sel.push_back(best);
    }
    return sel;
  };

  // fraction of points where the subset stays independent, and its mean score
  auto gate = [&](const std::vector<int>& sel, double& mean_smin) {
    int pass = 0;
    mean_smin = 0;
    for (const PointEval* pe : oks) {
      Mat j(n, n);
      for (int r = 0; r < n; ++r) j.row(r) = pe->jets[sel[r]].g.transpose() / scale[sel[r]];
      const double s = min_singular_value(j);
      mean_smin += s;
      if (s > tol_rank) ++pass;
    }
    mean_smin /= static_cast<double>(oks.size());
    return pass * 5 >= static_cast<int>(oks.size()) * 4;
  };

  std::vector<int> sel = complete({});
  if (sel.empty())
    throw ModelBuildError(ModelBuildError::Kind::rank_deficient,
                          "no usable invariant differentials");

  double mean_smin = 0;
  if (!gate(sel, mean_smin)) {
    // the top-scoring chain dead-ended; retry from every other seed candidate
    // (best first) before declaring that no subset works
    std::vector<int> order;
    std::vector<double> single(T, -1);
    for (int c = 0; c < T; ++c)
      if (alive[c]) {
        order.push_back(c);
        single[c] = joint_score({}, c);
      }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return single[a] > single[b]; });
    bool found = false;
    for (int c : order) {
      if (c == sel[0]) continue;
      const std::vector<int> alt = complete({c});
      if (!alt.empty() && gate(alt, mean_smin)) {
        sel = alt;
        found = true;
        break;
      }
    }
    if (!found)
      throw ModelBuildError(ModelBuildError::Kind::rank_deficient,
                            "no invariant subset with differentials independent at 80% of " +
                                std::to_string(oks.size()) + " regular points");
  }

  InvariantSelection out;
  out.idx = sel;
  out.score = mean_smin;
  for (int c : sel) {
    out.coordinate_keys.push_back(tracked[c].label);
    out.coord_parity.push_back(tracked[c].parity);
  }
  for (int c = 0; c < T; ++c)
    if (std::find(sel.begin(), sel.end(), c) == sel.end()) {
      out.dep_idx.push_back(c);
      out.dependent_keys.push_back(tracked[c].label);
      out.dep_parity.push_back(tracked[c].parity);
    }
  return out;
}

Model assemble_model(const OperatorSpec& op, int grid, const InvariantSelection& sel,
                     const std::vector<PointEval>& evals, double model_tol) {
  Model mo;
  mo.n = op.n;
  mo.m = op.m;
  mo.grid = grid;
  mo.tol = model_tol;
  mo.sel = sel;
  for (int i = 0; i < op.n; ++i)
    for (int j = i + 1; j < op.n; ++j)
      mo.ch_keys.push_back("ch_" + std::to_string(i + 1) + std::to_string(j + 1));

  for (const PointEval& pe : evals) {
    if (!pe.ok) {
      ++mo.rejected;
      continue;
    }
    Mat jac = invariant_jacobian(pe, sel.idx);
    Eigen::JacobiSVD<Mat> svd(jac);
    const Vec& sv = svd.singularValues();
    if (sv(0) <= 0 || sv(sv.size() - 1) < 1e-10 * sv(0)) {
      ++mo.rejected;  // coordinates degenerate here; ch pushforward undefined
      continue;
    }
    ModelSample s;
    s.x = pe.x;
    s.a = Vec(op.n);
    for (int k = 0; k < op.n; ++k) s.a(k) = pe.values[sel.idx[k]];
    s.f = Vec(static_cast<int>(sel.dep_idx.size()));
    for (size_t k = 0; k < sel.dep_idx.size(); ++k)
      s.f(static_cast<int>(k)) = pe.values[sel.dep_idx[k]];
    Mat chbar = chern_pushforward(pe, sel.idx);
    s.ch = Vec(static_cast<int>(mo.ch_keys.size()));
    int c = 0;
    for (int i = 0; i < op.n; ++i)
      for (int j = i + 1; j < op.n; ++j) s.ch(c++) = chbar(i, j);
    mo.samples.push_back(std::move(s));
  }
  if (mo.samples.size() * 2 < evals.size())
    throw ModelBuildError(ModelBuildError::Kind::too_few_samples,
                          std::to_string(mo.samples.size()) + " usable of " +
                              std::to_string(evals.size()) + " grid points");

  mo.hull_lo = Vec::Constant(op.n, std::numeric_limits<double>::infinity());
  mo.hull_hi = -mo.hull_lo;
  for (const auto& s : mo.samples) {
    mo.hull_lo = mo.hull_lo.cwiseMin(s.a);
    mo.hull_hi = mo.hull_hi.cwiseMax(s.a);
  }
  return mo;
}

}  // namespace

OperatorPointReport operator_regularity(const OperatorSpec& op, const Vec& x,
                                        const Tolerances& tol) {
  OperatorPointReport r;
  PointEval pe = evaluate_point(op, x, tol);
  r.symbol = pe.reg;
  if (!pe.ok) {
    r.diagnostic = pe.diagnostic;
    return r;
  }
  Mat g(static_cast<int>(pe.jets.size()), op.n);
  for (size_t i = 0; i < pe.jets.size(); ++i)
    g.row(static_cast<int>(i)) = pe.jets[i].g.transpose();
  Eigen::JacobiSVD<Mat> svd(g);
  const Vec& sv = svd.singularValues();
  if (sv.size() > 0 && sv(0) > 0)
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-8 * sv(0)) ++r.rank;
  r.regular = r.rank >= op.n;
  if (!r.regular) r.diagnostic = "invariant differentials rank " + std::to_string(r.rank);
  return r;
}

InvariantSelection select_natural_coordinates(const OperatorSpec& op, int grid,
                                              const Tolerances& tol, double tol_rank) {
  return select_from_evals(eval_grid(op, grid, tol, Exec::serial), op.n, op.m, tol_rank);
}

Model build_model(const OperatorSpec& op, int grid, const InvariantSelection& sel,
                  const Tolerances& tol, Exec ex, double model_tol) {
  return assemble_model(op, grid, sel, eval_grid(op, grid, tol, ex), model_tol);
}

json model_to_json(const Model& m) {
  json j;
  j["schema"] = m.schema;
  j["n"] = m.n;
  j["m"] = m.m;
  j["grid"] = m.grid;
  j["tol"] = m.tol;
  j["coordinate_keys"] = m.sel.coordinate_keys;
  j["dependent_keys"] = m.sel.dependent_keys;
  j["ch_keys"] = m.ch_keys;
  j["coord_parity"] = m.sel.coord_parity;
  j["dep_parity"] = m.sel.dep_parity;
  j["hull"] = {{"lo", vec_to_json(m.hull_lo)}, {"hi", vec_to_json(m.hull_hi)}};
  j["rejected"] = m.rejected;
  json samples = json::array();
  for (const auto& s : m.samples) {
    json e;
    e["x"] = vec_to_json(s.x);
    e["a"] = vec_to_json(s.a);
    e["F"] = vec_to_json(s.f);
    e["ch"] = vec_to_json(s.ch);
    samples.push_back(std::move(e));
  }
  j["samples"] = std::move(samples);
  return j;
}

Model model_from_json(const json& j) {
  Model m;
  if (j.at("schema").get<std::string>() != m.schema)
    throw std::runtime_error("unsupported model schema");
  m.n = j.at("n").get<int>();
  m.m = j.at("m").get<int>();
  m.grid = j.at("grid").get<int>();
  m.tol = j.at("tol").get<double>();
  m.sel.coordinate_keys = j.at("coordinate_keys").get<std::vector<std::string>>();
  m.sel.dependent_keys = j.at("dependent_keys").get<std::vector<std::string>>();
  m.ch_keys = j.at("ch_keys").get<std::vector<std::string>>();
  m.sel.coord_parity = j.at("coord_parity").get<std::vector<int>>();
  m.sel.dep_parity = j.at("dep_parity").get<std::vector<int>>();
  m.hull_lo = vec_from_json(j.at("hull").at("lo"));
  m.hull_hi = vec_from_json(j.at("hull").at("hi"));
  m.rejected = j.at("rejected").get<int>();
  for (const auto& e : j.at("samples")) {
    ModelSample s;
    s.x = vec_from_json(e.at("x"));
    s.a = vec_from_json(e.at("a"));
    s.f = vec_from_json(e.at("F"));
    s.ch = vec_from_json(e.at("ch"));
    m.samples.push_back(std::move(s));
  }
  return m;
}

Model load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

void save_model(const Model& m, const std::string& path) {
  write_json_file(model_to_json(m), path);
}

Model flip_model(const Model& m) {
  Model f = m;
  std::vector<double> chsign;
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      chsign.push_back((m.sel.coord_parity[i] + m.sel.coord_parity[j]) % 2 ? -1.0 : 1.0);
  for (auto& s : f.samples) {
    for (int k = 0; k < s.a.size(); ++k)
      if (m.sel.coord_parity[k]) s.a(k) = -s.a(k);
    for (int k = 0; k < s.f.size(); ++k)
      if (m.sel.dep_parity[k]) s.f(k) = -s.f(k);
    for (int k = 0; k < s.ch.size(); ++k) s.ch(k) *= chsign[k];
  }
  for (int k = 0; k < m.n; ++k)
    if (m.sel.coord_parity[k]) {
      f.hull_lo(k) = -m.hull_hi(k);
      f.hull_hi(k) = -m.hull_lo(k);
    }
  return f;
}

namespace {

std::vector<double> column_scales(const Model& a, const Model& b,
                                  const Vec ModelSample::*field, int count) {
  std::vector<double> s(count, 1.0);
  for (int k = 0; k < count; ++k) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, am = 0;
    for (const Model* m : {&a, &b})
      for (const auto& smp : m->samples) {
        const double v = (smp.*field)(k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        am = std::max(am, std::abs(v));
      }
    s[k] = std::max({hi - lo, am, 1.0});
  }
  return s;
}

EquivalenceVerdict compare_once(const Model& a, const Model& b, double tol) {
  EquivalenceVerdict v;
  if (a.samples.empty() || b.samples.empty()) {
    v.outcome = EquivalenceVerdict::Outcome::inconclusive;
    v.reason = "empty-model";
    return v;
  }
  const int n = a.n;
  const int nf = static_cast<int>(a.sel.dependent_keys.size());
  const int nc = static_cast<int>(a.ch_keys.size());
  const std::vector<double> sa = column_scales(a, b, &ModelSample::a, n);
  const std::vector<double> sf = column_scales(a, b, &ModelSample::f, nf);
  const std::vector<double> sc = column_scales(a, b, &ModelSample::ch, nc);
  const double tol_match = 100.0 * tol;

  for (int k = 0; k < n; ++k) {
    const double margin = tol_match * sa[k];
    if (a.hull_lo(k) > b.hull_hi(k) + margin || b.hull_lo(k) > a.hull_hi(k) + margin) {
      v.outcome = EquivalenceVerdict::Outcome::inconclusive;
      v.reason = "empty-overlap";
      return v;
    }
  }

  int matched = 0;
  double dist = 0;
  std::string worst;
  for (const auto& p : a.samples) {
    bool inside = true;
    for (int k = 0; k < n && inside; ++k)
      inside = p.a(k) >= b.hull_lo(k) - tol_match * sa[k] &&
               p.a(k) <= b.hull_hi(k) + tol_match * sa[k];
    if (!inside) continue;
    const ModelSample* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b.samples) {
      double d = 0;
      for (int k = 0; k < n; ++k) d = std::max(d, std::abs(p.a(k) - q.a(k)) / sa[k]);
      if (d < best) {
        best = d;
        nearest = &q;
      }
    }
    if (!nearest || best > tol_match) continue;
    ++matched;
    for (int k = 0; k < nf; ++k) {
      const double d = std::abs(p.f(k) - nearest->f(k)) / sf[k];
      if (d > dist) {
        dist = d;
        worst = a.sel.dependent_keys[k];
      }
    }
    for (int k = 0; k < nc; ++k) {
      const double d = std::abs(p.ch(k) - nearest->ch(k)) / sc[k];
      if (d > dist) {
        dist = d;
        worst = a.ch_keys[k];
      }
    }
  }

  v.coverage = static_cast<double>(matched) / static_cast<double>(a.samples.size());
  v.distance = dist;
  v.worst_key = worst;
  if (v.coverage >= 0.8 && dist <= tol) {
    v.outcome = EquivalenceVerdict::Outcome::equivalent;
  } else {
    v.outcome = EquivalenceVerdict::Outcome::not_equivalent;
    v.reason = dist > tol ? "distance" : "coverage";
  }
  return v;
}

}  // namespace

EquivalenceVerdict compare_models(const Model& a, const Model& b, double tol) {
  if (a.sel.coordinate_keys != b.sel.coordinate_keys ||
      a.sel.dependent_keys != b.sel.dependent_keys || a.ch_keys != b.ch_keys) {
    EquivalenceVerdict v;
    v.outcome = EquivalenceVerdict::Outcome::not_equivalent;
    v.reason = "key-mismatch";
    return v;
  }
  const double t = tol < 0 ? std::max(a.tol, b.tol) : tol;
  EquivalenceVerdict v1 = compare_once(a, b, t);
  if (a.m != 2) return v1;
  EquivalenceVerdict v2 = compare_once(a, flip_model(b), t);
  v2.flipped = true;
  using O = EquivalenceVerdict::Outcome;
  if (v1.outcome == O::equivalent) return v1;
  if (v2.outcome == O::equivalent) return v2;
  if (v1.outcome == O::not_equivalent) return v1;
  if (v2.outcome == O::not_equivalent) return v2;
  return v1;
}

AuditReport naturality_audit(const OperatorSpec& op, const GaugeTransform& g, int grid,
                             const Tolerances& tol) {
  const OperatorSpec op2 = apply_gauge(op, g);
  const std::vector<Vec> pts = interior_grid(op.lo, op.hi, grid);
  const std::vector<TrackedWord> tracked = tracked_invariants(op.n, op.m);
  AuditReport r;
  r.points = static_cast<int>(pts.size());
  for (const Vec& x : pts) {
    PointEval p1 = evaluate_point(op, x, tol);
    PointEval p2 = evaluate_point(op2, x, tol);
    if (!p1.ok || !p2.ok) continue;
    ++r.matched;
    for (size_t i = 0; i < p1.values.size(); ++i) {
      const double d = std::abs(p1.values[i] - p2.values[i]) / std::max(1.0, std::abs(p1.values[i]));
      if (d > r.max_invariant_residual) {
        r.max_invariant_residual = d;
        r.worst_invariant = tracked[i].label;
      }
    }
    r.max_ch_residual =
        std::max(r.max_ch_residual,
                 max_abs(p1.ch_frame - p2.ch_frame) / std::max(1.0, max_abs(p1.ch_frame)));

    const Mat P = g.P.eval(x);
    const Mat Pi = g.P_inv.eval(x);
    for (int k = 0; k < op.n; ++k) {
      const Mat want = P * p1.decomposed.sigma[k] * Pi;
      r.max_frame_sigma_residual =
          std::max(r.max_frame_sigma_residual,
                   max_abs(p2.decomposed.sigma[k] - want) / std::max(1.0, max_abs(want)));
      const Mat want_omega = P * p1.conn.omega[k].v * Pi + P * g.P_inv.diff(k).eval(x);
      r.max_omega_residual =
          std::max(r.max_omega_residual,
                   max_abs(p2.conn.omega[k].v - want_omega) / std::max(1.0, max_abs(want_omega)));
    }
    const Mat want_s0 = P * p1.conn.sigma0.v * Pi;
    r.max_sigma0_residual =
        std::max(r.max_sigma0_residual,
                 max_abs(p2.conn.sigma0.v - want_s0) / std::max(1.0, max_abs(want_s0)));
  }
  return r;
}

}  // namespace opgeom
