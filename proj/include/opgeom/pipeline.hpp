#pragma once

#include <string>
#include <vector>

#include "opgeom/connection.hpp"
#include "opgeom/operator_spec.hpp"

namespace opgeom {

struct TrackedWord {
  std::string label;
  TraceWord word;
  bool uses_sigma0 = false;
  int parity = 0;  // letter-2 count mod 2; sign under the m=2 frame flip
};

// Scalar invariants recorded per point: the basic symbol candidates followed
// by the subsymbol words; deterministic order for fixed (n, m).
std::vector<TrackedWord> tracked_invariants(int n, int m);

struct PointEval {
  bool ok = false;
  std::string diagnostic;
  Vec x;
  RegularityReport reg;
  MetricPoint metric;
  CoframePoint coframe;
  SymbolPoint decomposed;  // symbol components in the invariant frame
  AssociatedConnection conn;
  CurvatureResult curv;
  Mat ch_frame;                 // ch contracted with invariant frame pairs
  std::vector<double> values;   // tracked invariants, order = tracked_invariants
  std::vector<Jet2> jets;       // their 1-jets
};

PointEval evaluate_point(const OperatorSpec& op, const Vec& x, const Tolerances& tol = {});

// rows are the chart gradients of the invariants picked by idx
Mat invariant_jacobian(const PointEval& pe, const std::vector<int>& idx);

// ch expressed in the coordinates a_idx: J^-T ch J^-1 with J from the jets
Mat chern_pushforward(const PointEval& pe, const std::vector<int>& idx);

}  // namespace opgeom
