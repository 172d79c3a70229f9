#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace olproj {

using Vec = Eigen::ArrayXd;

// Online fractional unweighted set cover. Rows <row, x> >= 1 with Boolean
// rows arrive online; the solution starts at a_i = 1/n and is projected onto
// each new row under the unnormalized KL divergence, which only ever scales
// coordinates up.
struct SetCoverStep {
  Vec a;
  double lambda = 0.0;
};

// KL projection of a_prev onto {<row, x> >= 1}: z_i = a_i e^{lambda row_i}
// with lambda = log(1/<row, a_prev>) when the row is violated, else 0.
SetCoverStep sc_project(const Vec& a_prev, const std::vector<uint8_t>& row);

struct SetCoverTrace {
  Vec final;
  std::vector<double> lambdas;
  std::vector<double> cost_after;  // sum a after each row
  double final_cost = 0.0;
};

SetCoverTrace sc_run(int n, const std::vector<std::vector<uint8_t>>& rows);

}  // namespace olproj
