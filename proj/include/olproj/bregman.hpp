#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "olproj/polytope.hpp"
#include "olproj/tree.hpp"

namespace olproj {

// Raised when an iterative solve exhausts its budget without converging.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of the shifted multilevel entropy h(x) = sum_u w_u sum_j
// (x_{u,j}+shift) log (x_{u,j}+shift). The induced Bregman divergence is the
// projection distance; shift = delta keeps gradients Lipschitz on P_delta.
struct DivergenceParams {
  const WeightedTree* tree = nullptr;
  double shift = 0.0;
};

// D(x || x') = sum_u w_u sum_j ( xt log(xt/xt') - xt + xt' ),  xt = x + shift.
double divergence(const Vec& x, const Vec& xp, const DivergenceParams& params);

// Linear-term-free form: sum_u w_u sum_j xt log(xt/xt'). For Boolean y this
// is the potential against the algorithm's point.
double pdiv(const Vec& p, const Vec& q, const DivergenceParams& params);

// Potential Phi(y, x) = pdiv(y, x) for Boolean y; asserts each weighted term
// stays within [-shift log(1+1/shift), (1+shift) log(1+1/shift)] when x is in
// the box.
double potential(const Vec& y, const Vec& x, const DivergenceParams& params);

// W(x) = sum_u w_u sum_j x_{u,j}; satisfies D = pdiv - (W(x) - W(x')).
double weighted_mass(const Vec& x, const DivergenceParams& params);

struct DualCertificate {
  std::vector<std::pair<SubsetConstraint, double>> subsets;  // lambda_S >= 0
  Vec root;                                                  // lambda_{r,j} >= 0
  double gamma = 0.0;                                        // request cap

  // a_{u,j} and b_{u,j} of the stationarity conditions, assembled from the
  // multipliers above (gamma excluded; the request atom subtracts it).
  void assemble(const WeightedTree& tree, Vec& a, Vec& b) const;
};

struct ProjectOptions {
  double tol_feas = 1e-9;       // constraint violation accepted as feasible
  double tol_inner = 1e-11;     // Dykstra per-set violation target
  double tol_bisect = 1e-12;    // half-space tightness residual
  long max_sweeps = 100000;     // total inner sweeps across all rounds
  int max_rounds = 64;          // constraint-generation rounds
  bool want_certificate = true;
};

struct ProjectionResult {
  Vec x;
  bool converged = false;
  long sweeps = 0;
  int rounds = 0;
  int active_set_size = 0;
  double feas_residual = 0.0;
  // max over atoms of |w_u log(xt/xt_prev) - (a - b - gamma 1_request)|;
  // NaN when no certificate was recovered
  double stationarity_residual = 0.0;
  std::optional<DualCertificate> certificate;
};

// Bregman projection of x_prev onto P_t = P cap {x_{r_t,1} <= delta} under
// the shifted multilevel entropy divergence. Constraint generation over the
// subset family with a cyclic Bregman-Dykstra inner solve; the request cap,
// root bounds and box are permanent sets. Throws on an infeasible start;
// non-convergence is reported via the flag, never silently accepted.
ProjectionResult project(const Vec& x_prev, const PolytopeSpec& spec,
                         const DivergenceParams& params, const ProjectOptions& opts = {});

}  // namespace olproj
