#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "opgeom/grid.hpp"
#include "opgeom/io.hpp"
#include "opgeom/pipeline.hpp"

namespace opgeom {

struct OperatorPointReport {
  bool regular = false;  // pipeline succeeded and differentials span n directions
  int rank = 0;
  RegularityReport symbol;
  std::string diagnostic;
};

OperatorPointReport operator_regularity(const OperatorSpec& op, const Vec& x,
                                        const Tolerances& tol = {});

struct ModelBuildError : std::runtime_error {
  enum class Kind { rank_deficient, too_few_samples };
  Kind kind;
  ModelBuildError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct InvariantSelection {
  std::vector<int> idx;  // coordinate invariants, indices into tracked_invariants
  std::vector<int> dep_idx;
  std::vector<std::string> coordinate_keys;
  std::vector<std::string> dependent_keys;
  std::vector<int> coord_parity, dep_parity;  // m=2 frame-flip signs
  double score = 0;  // mean min-singular-value of the selected jacobian
};

// Greedy pick of n invariants whose differentials stay jointly independent
// across the grid; throws ModelBuildError on failure.
InvariantSelection select_natural_coordinates(const OperatorSpec& op, int grid,
                                              const Tolerances& tol = {},
                                              double tol_rank = 1e-6);

struct ModelSample {
  Vec x;   // chart point (bookkeeping only, never compared)
  Vec a;   // coordinate invariant values
  Vec f;   // dependent invariant values
  Vec ch;  // strict upper triangle of ch in the a-coordinates, row-major
};

struct Model {
  std::string schema = "opgeom-model/1";
  int n = 0, m = 0;
  int grid = 0;
  double tol = 1e-6;
  InvariantSelection sel;
  std::vector<std::string> ch_keys;
  Vec hull_lo, hull_hi;  // bounding box of the a-values
  std::vector<ModelSample> samples;
  int rejected = 0;
};

Model build_model(const OperatorSpec& op, int grid, const InvariantSelection& sel,
                  const Tolerances& tol = {}, Exec ex = Exec::parallel,
                  double model_tol = 1e-6);

json model_to_json(const Model& m);
Model model_from_json(const json& j);
Model load_model(const std::string& path);
void save_model(const Model& m, const std::string& path);

// m=2 frame-sign flip applied to every sample and the hull
Model flip_model(const Model& m);

struct EquivalenceVerdict {
  enum class Outcome { equivalent, not_equivalent, inconclusive };
  Outcome outcome = Outcome::inconclusive;
  double distance = 0;  // max scaled discrepancy over F and ch at matched pairs
  double coverage = 0;  // fraction of first-model samples matched
  bool flipped = false; // verdict obtained under the flipped m=2 orientation
  std::string reason;
  std::string worst_key;
};

// tol < 0 uses the larger of the two models' stored tolerances
EquivalenceVerdict compare_models(const Model& a, const Model& b, double tol = -1);

struct AuditReport {
  int points = 0;
  int matched = 0;  // points where both pipelines succeeded
  double max_invariant_residual = 0;
  double max_ch_residual = 0;
  double max_frame_sigma_residual = 0;
  double max_omega_residual = 0;
  double max_sigma0_residual = 0;
  std::string worst_invariant;
};

// Compares the pipeline of op and apply_gauge(op, g) at shared grid points:
// scalar invariants and frame ch must agree, sigma/omega/sigma0 must conjugate.
AuditReport naturality_audit(const OperatorSpec& op, const GaugeTransform& g, int grid,
                             const Tolerances& tol = {});

}  // namespace opgeom
