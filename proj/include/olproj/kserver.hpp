#pragma once

#include <optional>
#include <string>
#include <vector>

#include "olproj/bregman.hpp"
#include "olproj/polytope.hpp"
#include "olproj/tree.hpp"

namespace olproj {

// Online fractional (h,k)-server on a weighted tree: serve requests by
// Bregman-projecting the anti-server point onto P cap {x_{r_t,1} <= delta}.
struct KServerState {
  const WeightedTree* tree = nullptr;
  int k = 1;
  int h = 1;
  double delta = 0.0;
  Vec x;
  int step = 0;
  std::optional<int> last_request;  // leaf node index
  double total_move = 0.0;          // sum ||x^t - x^{t-1}||_T
  double total_move_pos = 0.0;      // sum ||(x^t - x^{t-1})^+||_T
  double total_server_move = 0.0;   // sum d(z^t, z^{t-1})

  DivergenceParams div_params() const { return {tree, delta}; }
  PolytopeSpec spec(std::optional<int> request = std::nullopt) const {
    return {tree, h, delta, request};
  }
};

// x^0: delta at occupied leaves and an equal share elsewhere; internal nodes
// take the sorted concatenation of their children's values; the root is
// pinned to 1_{j>h}. Membership is validated before returning.
KServerState init_state(const WeightedTree& tree, int k, int h,
                        const std::vector<int>& initial_leaves);

struct AuditCheck {
  std::string name;
  bool passed = true;
  bool skipped = false;
  double residual = 0.0;
};

struct AuditReport {
  std::vector<AuditCheck> checks;

  void add(std::string name, bool passed, double residual);
  void skip(std::string name);
  bool all_passed() const;
  int passed_count() const;
  int skipped_count() const;
};

// Per-state structural checks: root pattern, box with the request pinned at
// delta and leaves >= delta, slot monotonicity, per-level mass = n-h.
AuditReport structural_report(const WeightedTree& tree, int h, double delta,
                              std::optional<int> request, const Vec& x, double tol = 1e-8);

// Step audits against a comparator move y_prev -> y_new (Boolean encodings,
// y_new feasible for the request):
//  opt_charge  : potential gain <= (1+d)log(1+1/d) * OPT's positive movement
//  shadow_cost : pdiv(x_new, x_prev) + Phi(y_new,x_new) - Phi(y_new,x_prev) <= 0
//  rev_pyth    : D(y||x_prev) >= D(y||x_new) + D(x_new||x_prev)
// and, when the projection carries a certificate:
//  eq5         : ||(dx)^+||_T <= sum A_{u,j}
//  cs_level    : sum_j B_{u,j} = sum_{chi_u} A_{v,l} per node
//  charge_up   : sum_{chi_u} A <= sum_j A_{u,j} - w_u (x_u^t - x_u^{t-1})
//  second_bound: D(y||x_prev) - D(y||x_new) >= delta * gamma_t
AuditReport audit_step(const WeightedTree& tree, double delta, const Vec& x_prev,
                       const Vec& x_new, const ProjectionResult& result, const Vec& y_prev,
                       const Vec& y_new);

struct KServerStepRecord {
  int request = -1;
  double movement = 0.0;
  double movement_pos = 0.0;
  double server_movement = 0.0;
  double phi_before = 0.0;  // vs comparator; NaN without one
  double phi_after = 0.0;
  bool converged = true;
  long sweeps = 0;
  int rounds = 0;
  int active_set_size = 0;
  double feas_residual = 0.0;
  double stationarity_residual = 0.0;
  bool has_certificate = false;
  AuditReport audit;
};

enum class AuditLevel { Off, Primal, Full };

// Serve one request. With a comparator move supplied, Full-level audits run;
// Primal runs the structural checks only.
KServerStepRecord serve(KServerState& state, int request_leaf, AuditLevel level = AuditLevel::Primal,
                        const Vec* y_prev = nullptr, const Vec* y_new = nullptr,
                        const ProjectOptions& opts = {});

struct KServerRunSummary {
  std::vector<KServerStepRecord> steps;
  double total_move = 0.0;
  double total_move_pos = 0.0;
  double total_server_move = 0.0;
  // filled when a comparator trajectory was supplied
  bool has_comparator = false;
  double opt_move_pos = 0.0;  // sum_t ||(y^t - y^{t-1})^+||_T
  double phi0 = 0.0, phiT = 0.0;
  double W0 = 0.0, WT = 0.0;
  double aggregate_lhs = 0.0;   // total positive movement
  double aggregate_rhs = 0.0;   // 3(D+1)(1+d)log(1+1/d) OPT+ + 3(D+1)(Phi0-PhiT) + D(W0-WT)
  bool aggregate_ok = true;
};

// Run a request sequence. comparator_configs, when given, holds OPT's leaf
// configuration after each step (from the offline oracle); OPT's move is
// applied before the algorithm's move within a step.
KServerRunSummary run_kserver(KServerState& state, const std::vector<int>& requests,
                              AuditLevel level = AuditLevel::Primal,
                              const std::vector<std::vector<int>>* comparator_configs = nullptr,
                              const std::vector<int>* comparator_initial = nullptr,
                              const ProjectOptions& opts = {});

}  // namespace olproj
