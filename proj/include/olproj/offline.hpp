#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "olproj/tree.hpp"

namespace olproj {

// Exact offline optima at desk scale. Costs use the same conventions as the
// online algorithms: k-server moves pay the subtree-count tree distance,
// paging pays w_i when page i is evicted, set cover counts chosen sets.
struct OfflineSolution {
  std::vector<std::vector<int>> configs;  // per step; leaves / cached pages / chosen sets
  double cost = 0.0;
};

// Exhaustive DP over h-server multisets of leaves. Transition costs are
// minimum-cost matchings, enumerated over permutations (h <= 4).
// initial_leaves has exactly h entries.
OfflineSolution opt_kserver_dp(const WeightedTree& tree, int h, const std::vector<int>& requests,
                               const std::vector<int>& initial_leaves);

// Time-expanded min-cost-flow formulation of the same problem (h <= 3).
OfflineSolution opt_kserver_flow(const WeightedTree& tree, int h, const std::vector<int>& requests,
                                 const std::vector<int>& initial_leaves);

// Dispatcher honoring the size limits of both methods.
OfflineSolution opt_kserver(const WeightedTree& tree, int h, const std::vector<int>& requests,
                            const std::vector<int>& initial_leaves);

// Exhaustive DP over h-page caches; pays w_i on evicting page i.
OfflineSolution opt_paging(const Vec& weights, int h, const std::vector<int>& requests,
                           const std::vector<int>& initial_pages);

// Minimum-cardinality cover of all rows, exhaustive over 2^n subsets (n <= 16).
// configs holds the single chosen set (element indices).
OfflineSolution opt_setcover(int n, const std::vector<std::vector<uint8_t>>& rows);

// Lazy monotone comparator trajectory: b^t covers rows 1..t, only ever flips
// 0 -> 1, and ends within the optimal cover.
std::vector<std::vector<uint8_t>> monotone_cover_trajectory(
    int n, const std::vector<std::vector<uint8_t>>& rows, const std::vector<int>& opt_cover);

// Cost of re-simulating a k-server configuration sequence from the initial
// configuration (sum of consecutive tree distances).
double resimulate_kserver_cost(const WeightedTree& tree, const std::vector<int>& initial_leaves,
                               const std::vector<std::vector<int>>& configs);

}  // namespace olproj
