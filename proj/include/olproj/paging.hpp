#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace olproj {

using Vec = Eigen::ArrayXd;

// Weighted (h,k)-paging over the shifted anti-paging polytope
//   P_delta = { a in [delta,1]^n : sum a_i >= n-h },  delta = (k-h+1/2)/(k+1/2).
// The algorithm keeps ||a||_1 = n-h exactly and a_{r_t} = delta after a serve.
struct PagingParams {
  Vec weights;
  int k = 1;
  int h = 1;

  int n() const { return static_cast<int>(weights.size()); }
  double delta() const { return (k - h + 0.5) / (k + 0.5); }
};

// a^0: delta on the initial cache, (n-h-delta*k)/(n-k) elsewhere.
Vec paging_initial(const PagingParams& p, const std::vector<int>& initial_pages);

struct PagingStepResult {
  Vec a;
  double lambda = 0.0;   // mass multiplier, >= 0
  double residual = 0.0; // |sum a - (n-h)| after the step
};

// One projection step: a_r <- delta, every other coordinate rises to
// min(1, a_i e^{lambda/w_i}) with lambda chosen so the total mass stays n-h.
PagingStepResult paging_project(const Vec& a_prev, int request, const PagingParams& p,
                                double tol = 1e-12);

struct PagingStep {
  int request = -1;
  double movement = 0.0;      // ||a^t - a^{t-1}||_{w,1}
  double movement_pos = 0.0;  // positive part only
  double lambda = 0.0;
};

struct PagingTrace {
  Vec initial;
  Vec final;
  std::vector<PagingStep> steps;
  double total_movement = 0.0;
  double total_movement_pos = 0.0;
};

PagingTrace paging_run(const PagingParams& p, const std::vector<int>& initial_pages,
                       const std::vector<int>& requests);

// Phi(b, a) = sum_{i: b_i = 1} w_i log(1/a_i) for Boolean b.
double paging_potential(const Vec& b, const Vec& a, const Vec& weights);

}  // namespace olproj
