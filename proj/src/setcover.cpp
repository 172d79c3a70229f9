#include "olproj/setcover.hpp"

#include <cmath>
#include <stdexcept>

namespace olproj {

SetCoverStep sc_project(const Vec& a_prev, const std::vector<uint8_t>& row) {
  if (static_cast<int>(row.size()) != a_prev.size())
    throw std::invalid_argument("sc_project: dimension mismatch");
  double dot = 0.0;
  bool any = false;
  for (int i = 0; i < a_prev.size(); ++i)
    if (row[i]) {
      dot += a_prev[i];
      any = true;
    }
  if (!any) throw std::invalid_argument("sc_project: all-zero row is unsatisfiable");

  SetCoverStep out;
  out.a = a_prev;
  if (dot >= 1.0) {
    out.lambda = 0.0;
    return out;
  }
  // Boolean rows scale the support uniformly; lambda = log(1/<row, a>).
  out.lambda = std::log(1.0 / dot);
  for (int i = 0; i < a_prev.size(); ++i)
    if (row[i]) out.a[i] = a_prev[i] / dot;
  return out;
}

SetCoverTrace sc_run(int n, const std::vector<std::vector<uint8_t>>& rows) {
  if (n < 1) throw std::invalid_argument("sc_run: need n >= 1");
  SetCoverTrace tr;
  Vec a = Vec::Constant(n, 1.0 / n);
  for (const auto& row : rows) {
    auto step = sc_project(a, row);
    a = step.a;
    tr.lambdas.push_back(step.lambda);
    tr.cost_after.push_back(a.sum());
  }
  tr.final = a;
  tr.final_cost = a.sum();
  return tr;
}

}  // namespace olproj
