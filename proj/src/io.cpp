#include "opgeom/io.hpp"

#include <fstream>
#include <stdexcept>

namespace opgeom {

json vec_to_json(const Vec& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Vec vec_from_json(const json& j) {
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = j.at(i).get<double>();
  return v;
}

json mat_to_json(const Mat& m) {
  json j = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

Mat mat_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return Mat(0, 0);
  const int cols = static_cast<int>(j.at(0).size());
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols)
      throw std::runtime_error("matrix rows have unequal lengths");
    for (int c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

json poly_to_json(const PolyScalarField& p) {
  json j = json::array();
  for (const auto& [exp, c] : p.terms) {
    json t;
    t["exp"] = exp;
    t["c"] = c;
    j.push_back(std::move(t));
  }
  return j;
}

PolyScalarField poly_from_json(const json& j, int n) {
  PolyScalarField p(n);
  for (const auto& t : j) {
    std::vector<int> exp = t.at("exp").get<std::vector<int>>();
    if (static_cast<int>(exp.size()) != n)
      throw std::runtime_error("term exponent length != n");
    for (int e : exp)
      if (e < 0) throw std::runtime_error("negative exponent");
    p.terms.emplace_back(std::move(exp), t.at("c").get<double>());
  }
  p.canonicalize();
  return p;
}

json matfield_to_json(const PolyMatrixField& f) {
  json j = json::array();
  for (int r = 0; r < f.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < f.cols; ++c) row.push_back(poly_to_json(f.at(r, c)));
    j.push_back(std::move(row));
  }
  return j;
}

PolyMatrixField matfield_from_json(const json& j, int n, int rows, int cols) {
  if (static_cast<int>(j.size()) != rows) throw std::runtime_error("matrix field: wrong row count");
  PolyMatrixField f(n, rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols)
      throw std::runtime_error("matrix field: wrong column count");
    for (int c = 0; c < cols; ++c) f.at(r, c) = poly_from_json(j.at(r).at(c), n);
  }
  return f;
}

json operator_to_json(const OperatorSpec& op) {
  json j;
  j["n"] = op.n;
  j["m"] = op.m;
  j["chart"] = {{"lo", vec_to_json(op.lo)}, {"hi", vec_to_json(op.hi)}};
  json a = json::array();
  for (const auto& ai : op.A) a.push_back(matfield_to_json(ai));
  j["A"] = std::move(a);
  j["B"] = matfield_to_json(op.B);
  return j;
}

OperatorSpec operator_from_json(const json& j) {
  OperatorSpec op;
  op.n = j.at("n").get<int>();
  op.m = j.at("m").get<int>();
  if (op.n < 2 || op.m < 2) throw std::runtime_error("operator requires n >= 2 and m >= 2");
  op.lo = vec_from_json(j.at("chart").at("lo"));
  op.hi = vec_from_json(j.at("chart").at("hi"));
  if (op.lo.size() != op.n || op.hi.size() != op.n)
    throw std::runtime_error("chart bounds must have length n");
  for (int i = 0; i < op.n; ++i)
    if (!(op.lo(i) < op.hi(i))) throw std::runtime_error("chart must satisfy lo < hi");
  if (static_cast<int>(j.at("A").size()) != op.n)
    throw std::runtime_error("A must list n matrix fields");
  for (const auto& a : j.at("A")) op.A.push_back(matfield_from_json(a, op.n, op.m, op.m));
  op.B = matfield_from_json(j.at("B"), op.n, op.m, op.m);
  return op;
}

json gauge_to_json(const GaugeTransform& g) {
  json j;
  j["n"] = g.n;
  j["m"] = g.m;
  j["P"] = matfield_to_json(g.P);
  j["P_inv"] = matfield_to_json(g.P_inv);
  return j;
}

GaugeTransform gauge_from_json(const json& j) {
  GaugeTransform g;
  g.n = j.at("n").get<int>();
  g.m = j.at("m").get<int>();
  g.P = matfield_from_json(j.at("P"), g.n, g.m, g.m);
  g.P_inv = matfield_from_json(j.at("P_inv"), g.n, g.m, g.m);
  return g;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

OperatorSpec load_operator(const std::string& path) {
  return operator_from_json(read_json_file(path));
}

void save_operator(const OperatorSpec& op, const std::string& path) {
  write_json_file(operator_to_json(op), path);
}

GaugeTransform load_gauge(const std::string& path) {
  return gauge_from_json(read_json_file(path));
}

void save_gauge(const GaugeTransform& g, const std::string& path) {
  write_json_file(gauge_to_json(g), path);
}

}  // namespace opgeom
