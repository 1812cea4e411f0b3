#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opgeom/grid.hpp"
#include "opgeom/io.hpp"
#include "opgeom/model.hpp"
#include "opgeom/pipeline.hpp"

namespace og = opgeom;
using og::json;

namespace {

og::Vec parse_point(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error("--point must be comma-separated numbers, got '" + item + "'");
    }
  }
  og::Vec x(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) x(static_cast<int>(i)) = vals[i];
  return x;
}

void emit(const json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    og::write_json_file(j, out);
}

std::vector<og::Vec> resolve_points(const og::OperatorSpec& op, const std::string& point,
                                    int grid) {
  if (!point.empty()) {
    og::Vec x = parse_point(point);
    if (x.size() != op.n) throw std::runtime_error("--point must have n components");
    return {x};
  }
  return og::interior_grid(op.lo, op.hi, grid);
}

og::Tolerances make_tol(std::uint64_t seed, double tol_override) {
  og::Tolerances t;
  t.seed = seed;
  if (tol_override > 0) {
    t.tol_det_base = tol_override;
    t.tol_disc = tol_override;
    t.tol_zeta = tol_override;
  }
  return t;
}

json regularity_flags(const og::RegularityReport& r) {
  json f;
  f["dims_ok"] = r.dims_ok;
  f["chi_nonzero"] = r.chi_nonzero;
  f["g_nondegenerate"] = r.g_nondegenerate;
  f["coframe_independent"] = r.coframe_independent;
  f["sigma_variety_proper"] = r.sigma_proper;
  // only the gates that enter this fibre branch: zeta for m >= 3, the chi
  // pairing for m = 2; the other would print its unused default
  if (r.m >= 3)
    f["zeta_nonvanishing"] = r.zeta_ok;
  else
    f["chi_pairing_nonzero"] = r.pairing_ok;
  f["general"] = r.general;
  f["witness"] = {{"chi_norm", r.chi_norm},
                  {"det_g", r.det_g},
                  {"coframe_cond", r.cond},
                  {"chi_pairing", r.pairing},
                  {"max_abs_disc", r.max_abs_disc}};
  if (!r.diagnostic.empty()) f["diagnostic"] = r.diagnostic;
  return f;
}

json coframe_json(const og::CoframePoint& cf) {
  json c;
  c["estar"] = og::mat_to_json(cf.estar);
  c["frame"] = og::mat_to_json(cf.frame);
  c["cond"] = cf.cond;
  c["m2_branch"] = cf.m2_branch;
  if (cf.m2_branch) c["m2_norm_sign"] = cf.m2_norm_sign;
  return c;
}

int cmd_invariants(const std::string& op_file, const std::string& point, int grid,
                   std::uint64_t seed, double tol_override, const std::string& out) {
  const og::OperatorSpec op = og::load_operator(op_file);
  const og::Tolerances tol = make_tol(seed, tol_override);
  json points = json::array();
  bool all_ok = true;
  for (const og::Vec& x : resolve_points(op, point, grid)) {
    const og::SymbolPoint sp = og::symbol_at(op, x).value();
    const og::RegularityReport rep = og::general_position(sp, tol);
    json e;
    e["x"] = og::vec_to_json(x);
    e["regular"] = rep.general;
    e["flags"] = regularity_flags(rep);
    if (rep.general) {
      const og::CoframePoint cf = og::invariant_coframe(sp, tol);
      e["coframe"] = coframe_json(cf);
      json inv;
      for (const auto& [k, v] : og::invariant_vector(og::frame_decompose(sp, cf), nullptr))
        inv[k] = v;
      e["invariants"] = std::move(inv);
    } else {
      all_ok = false;
    }
    points.push_back(std::move(e));
  }
  json j;
  j["command"] = "invariants";
  j["seed"] = seed;
  j["points"] = std::move(points);
  emit(j, out);
  return all_ok ? 0 : 3;
}

int cmd_regularity(const std::string& op_file, const std::string& point, int grid,
                   std::uint64_t seed, double tol_override, const std::string& out) {
  const og::OperatorSpec op = og::load_operator(op_file);
  const og::Tolerances tol = make_tol(seed, tol_override);
  json points = json::array();
  int regular = 0, total = 0;
  for (const og::Vec& x : resolve_points(op, point, grid)) {
    const og::OperatorPointReport r = og::operator_regularity(op, x, tol);
    json e;
    e["x"] = og::vec_to_json(x);
    e["regular"] = r.regular;
    e["rank"] = r.rank;
    e["symbol"] = regularity_flags(r.symbol);
    if (!r.diagnostic.empty()) e["diagnostic"] = r.diagnostic;
    points.push_back(std::move(e));
    ++total;
    if (r.regular) ++regular;
  }
  json j;
  j["command"] = "regularity";
  j["seed"] = seed;
  j["regular_points"] = regular;
  j["total_points"] = total;
  j["points"] = std::move(points);
  emit(j, out);
  return 2 * regular >= total ? 0 : 3;
}

int cmd_connection(const std::string& op_file, const std::string& point, std::uint64_t seed,
                   double tol_override, const std::string& out) {
  const og::OperatorSpec op = og::load_operator(op_file);
  const og::Tolerances tol = make_tol(seed, tol_override);
  og::Vec x = point.empty() ? op.center() : parse_point(point);
  if (x.size() != op.n) throw std::runtime_error("--point must have n components");
  const og::PointEval pe = og::evaluate_point(op, x, tol);
  json j;
  j["command"] = "connection";
  j["seed"] = seed;
  j["x"] = og::vec_to_json(x);
  j["regular"] = pe.ok;
  j["flags"] = regularity_flags(pe.reg);
  if (!pe.ok) {
    j["diagnostic"] = pe.diagnostic;
    emit(j, out);
    return 3;
  }
  json alpha = json::array(), omega = json::array();
  for (int k = 0; k < op.n; ++k) {
    alpha.push_back(og::mat_to_json(pe.conn.minimal.alpha[k].v));
    omega.push_back(og::mat_to_json(pe.conn.omega[k].v));
  }
  j["alpha"] = std::move(alpha);
  j["lambda"] = og::vec_to_json(pe.conn.lambda.v.col(0));
  j["omega"] = std::move(omega);
  j["sigma0"] = og::mat_to_json(pe.conn.sigma0.v);
  j["minimal_residual"] = pe.conn.minimal.residual;
  j["gram_min_eig"] = pe.conn.minimal.gram_min_eig;
  j["galerkin_min_abs_eig"] = pe.conn.minimal.galerkin_min_abs_eig;
  j["associated_residual"] = pe.conn.residual;
  j["ch"] = og::mat_to_json(pe.curv.ch);
  j["ch_frame"] = og::mat_to_json(pe.ch_frame);
  j["coframe"] = coframe_json(pe.coframe);
  emit(j, out);
  return 0;
}

int cmd_model(const std::string& op_file, int grid, std::uint64_t seed, double tol_override,
              double model_tol, const std::string& out) {
  const og::OperatorSpec op = og::load_operator(op_file);
  const og::Tolerances tol = make_tol(seed, tol_override);
  const og::InvariantSelection sel = og::select_natural_coordinates(op, grid, tol);
  const og::Model m = og::build_model(op, grid, sel, tol, og::Exec::parallel, model_tol);
  emit(og::model_to_json(m), out);
  return 0;
}

int cmd_equiv(const std::string& m1_file, const std::string& m2_file, double model_tol,
              const std::string& out) {
  const og::Model m1 = og::load_model(m1_file);
  const og::Model m2 = og::load_model(m2_file);
  const og::EquivalenceVerdict v = og::compare_models(m1, m2, model_tol > 0 ? model_tol : -1);
  json j;
  j["command"] = "equiv";
  using O = og::EquivalenceVerdict::Outcome;
  j["outcome"] = v.outcome == O::equivalent      ? "equivalent"
                 : v.outcome == O::not_equivalent ? "not_equivalent"
                                                   : "inconclusive";
  j["distance"] = v.distance;
  j["coverage"] = v.coverage;
  j["flipped"] = v.flipped;
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (!v.worst_key.empty()) j["worst_key"] = v.worst_key;
  emit(j, out);
  return v.outcome == O::equivalent ? 0 : v.outcome == O::not_equivalent ? 1 : 4;
}

int cmd_gauge(const std::string& op_file, const std::string& gauge_file,
              const std::string& out) {
  const og::OperatorSpec op = og::load_operator(op_file);
  const og::GaugeTransform g = og::load_gauge(gauge_file);
  if (g.n != op.n || g.m != op.m) throw std::runtime_error("gauge dimensions do not match");
  if (!og::gauge_valid(g, op.lo, op.hi))
    throw std::runtime_error("invalid gauge: P*P_inv != id on the chart");
  emit(og::operator_to_json(og::apply_gauge(op, g)), out);
  return 0;
}

int cmd_audit(const std::string& op_file, const std::string& gauge_file, int grid,
              std::uint64_t seed, double tol_override, const std::string& out) {
  const og::OperatorSpec op = og::load_operator(op_file);
  const og::GaugeTransform g = og::load_gauge(gauge_file);
  if (g.n != op.n || g.m != op.m) throw std::runtime_error("gauge dimensions do not match");
  if (!og::gauge_valid(g, op.lo, op.hi))
    throw std::runtime_error("invalid gauge: P*P_inv != id on the chart");
  const og::AuditReport r = og::naturality_audit(op, g, grid, make_tol(seed, tol_override));
  json j;
  j["command"] = "audit";
  j["seed"] = seed;
  j["points"] = r.points;
  j["matched"] = r.matched;
  j["max_invariant_residual"] = r.max_invariant_residual;
  j["max_ch_residual"] = r.max_ch_residual;
  j["max_frame_sigma_residual"] = r.max_frame_sigma_residual;
  j["max_omega_residual"] = r.max_omega_residual;
  j["max_sigma0_residual"] = r.max_sigma0_residual;
  if (!r.worst_invariant.empty()) j["worst_invariant"] = r.worst_invariant;
  emit(j, out);
  return 0;
}

int cmd_codim(int n, int m, int trials, std::uint64_t seed, const std::string& out) {
  og::Rng rng(seed);
  og::Tolerances tol;
  tol.seed = seed;
  json rows = json::array();
  bool all_match = true;
  const long expected = og::orbit_codimension(n, m);
  for (int t = 0; t < trials; ++t) {
    const og::SymbolPoint s = og::random_general_symbol(n, m, rng, tol);
    const og::CodimCheck c = og::verify_codimension(s);
    json e;
    e["trial"] = t;
    e["expected"] = c.expected;
    e["numeric"] = c.numeric;
    e["match"] = c.numeric == c.expected;
    all_match = all_match && c.numeric == c.expected;
    rows.push_back(std::move(e));
  }
  json j;
  j["command"] = "codim";
  j["n"] = n;
  j["m"] = m;
  j["seed"] = seed;
  j["expected"] = expected;
  j["trials"] = std::move(rows);
  j["all_match"] = all_match;
  emit(j, out);
  return all_match ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariants, canonical connections, and gauge-equivalence of first-order "
               "linear differential operators"};
  app.require_subcommand(1);

  std::string op_file, gauge_file, m1_file, m2_file, point, out;
  int grid = 9, trials = 20, cn = 0, cm = 0;
  std::uint64_t seed = 0;
  double tol_override = -1, model_tol = 1e-6;

  auto add_common = [&](CLI::App* c, bool with_grid = true) {
    c->add_option("--seed", seed, "rng seed for sampled checks");
    c->add_option("--tol", tol_override, "override regularity thresholds");
    c->add_option("--out", out, "write the JSON report here instead of stdout");
    if (with_grid) c->add_option("--grid", grid, "interior grid points per axis");
  };

  CLI::App* inv = app.add_subcommand("invariants", "symbol invariants at points");
  inv->add_option("op", op_file, "operator file")->required();
  inv->add_option("--point", point, "comma-separated chart point");
  add_common(inv);

  CLI::App* reg = app.add_subcommand("regularity", "operator regularity at points");
  reg->add_option("op", op_file, "operator file")->required();
  reg->add_option("--point", point, "comma-separated chart point");
  add_common(reg);

  CLI::App* conn = app.add_subcommand("connection", "associated connection at a point");
  conn->add_option("op", op_file, "operator file")->required();
  conn->add_option("--point", point, "comma-separated chart point (default: chart center)");
  add_common(conn, false);

  CLI::App* mdl = app.add_subcommand("model", "build the equivalence model on a grid");
  mdl->add_option("op", op_file, "operator file")->required();
  mdl->add_option("--model-tol", model_tol, "comparison tolerance stored in the model");
  add_common(mdl);

  CLI::App* eqv = app.add_subcommand("equiv", "compare two model files");
  eqv->add_option("model1", m1_file, "first model")->required();
  eqv->add_option("model2", m2_file, "second model")->required();
  eqv->add_option("--tol", model_tol, "comparison tolerance (default: from the models)");
  eqv->add_option("--out", out, "write the verdict here instead of stdout");

  CLI::App* gge = app.add_subcommand("gauge", "apply a gauge transform to an operator");
  gge->add_option("op", op_file, "operator file")->required();
  gge->add_option("gauge", gauge_file, "gauge file")->required();
  gge->add_option("--out", out, "write the transformed operator here");

  CLI::App* aud = app.add_subcommand("audit", "naturality audit of a gauge pair");
  aud->add_option("op", op_file, "operator file")->required();
  aud->add_option("gauge", gauge_file, "gauge file")->required();
  add_common(aud);

  CLI::App* cdm = app.add_subcommand("codim", "orbit codimension: formula vs numeric rank");
  cdm->add_option("n", cn, "chart dimension")->required();
  cdm->add_option("m", cm, "fibre dimension")->required();
  cdm->add_option("--trials", trials, "number of random symbols");
  cdm->add_option("--seed", seed, "rng seed");
  cdm->add_option("--out", out, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (inv->parsed()) return cmd_invariants(op_file, point, grid, seed, tol_override, out);
    if (reg->parsed()) return cmd_regularity(op_file, point, grid, seed, tol_override, out);
    if (conn->parsed()) return cmd_connection(op_file, point, seed, tol_override, out);
    if (mdl->parsed()) return cmd_model(op_file, grid, seed, tol_override, model_tol, out);
    if (eqv->parsed()) return cmd_equiv(m1_file, m2_file, eqv->count("--tol") ? model_tol : -1, out);
    if (gge->parsed()) return cmd_gauge(op_file, gauge_file, out);
    if (aud->parsed()) return cmd_audit(op_file, gauge_file, grid, seed, tol_override, out);
    if (cdm->parsed()) return cmd_codim(cn, cm, trials, seed, out);
  } catch (const og::ModelBuildError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
