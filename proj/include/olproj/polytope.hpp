#pragma once

#include <optional>
#include <string>
#include <vector>

#include "olproj/tree.hpp"

namespace olproj {

// Anti-server polytope P for a tree and OPT server count h:
//   x in [0,1]^N,  x_{r,j} >= 1_{j>h},
//   sum_{j<=|S|} x_{u,j} <= sum_{(v,l) in S} x_{v,l}   for all u, S subset of chi_u.
// The shifted polytope P_delta additionally keeps leaf atoms >= delta; the
// request-restricted P_t caps x_{request,1} <= delta.
struct PolytopeSpec {
  const WeightedTree* tree = nullptr;
  int h = 1;
  double delta = 0.0;
  std::optional<int> request;  // leaf node index

  static double delta_for(int k, int h) { return (k - h + 0.5) / (k + 0.5); }
};

// One subset constraint: sum_{j<=|S|} x_{parent,j} <= sum over member atoms.
struct SubsetConstraint {
  int parent = -1;
  std::vector<int> members;  // flat atom indices, children atoms of parent

  int size() const { return static_cast<int>(members.size()); }
  // LHS - RHS; feasible when <= 0
  double violation(const WeightedTree& tree, const Vec& x) const;
  bool operator==(const SubsetConstraint& o) const {
    return parent == o.parent && members == o.members;
  }
};

enum class ConstraintFamily { Box, Root, Subset, LeafShift, RequestCap };

struct Violation {
  ConstraintFamily family;
  double amount = 0.0;        // positive; how far past feasibility
  int atom = -1;              // for box/root/leaf/cap
  std::optional<SubsetConstraint> subset;
};

struct MembershipReport {
  // worst violation per family; 0 when the family is satisfied
  double box = 0.0;
  double root = 0.0;
  double subset = 0.0;
  double leaf_shift = 0.0;
  double request_cap = 0.0;
  std::optional<SubsetConstraint> worst_subset;

  bool in_P(double tol) const { return box <= tol && root <= tol && subset <= tol; }
  bool in_P_delta(double tol) const { return in_P(tol) && leaf_shift <= tol; }
  bool in_P_t(double tol) const { return in_P(tol) && request_cap <= tol; }
};

MembershipReport check_membership(const Vec& x, const PolytopeSpec& spec, double tol = 1e-9);

// Most-violated constraint, or nullopt if x is feasible within tol. Box
// violations are reported before root bounds, which come before subset
// constraints; within a family the largest violation wins, ties broken by
// smallest node id then smallest subset size. Only the canonical subset of
// each size (the s smallest-valued child atoms) is ever examined.
std::optional<Violation> separate(const Vec& x, const PolytopeSpec& spec, double tol = 1e-9);

// Canonical subset constraint of size s at node u: the s smallest child
// atoms by value (ties by atom index).
SubsetConstraint canonical_subset(const WeightedTree& tree, const Vec& x, int u, int s);

// All tight canonical subset constraints at node u. With exhaustive=true
// (fanout <= 12 only) every subset is examined instead.
std::vector<SubsetConstraint> tight_sets(const Vec& x, const PolytopeSpec& spec, int u,
                                         double tol = 1e-9, bool exhaustive = false);

// Children atoms chi_u as flat indices, ordered by (child node, slot).
std::vector<int> children_atoms(const WeightedTree& tree, int u);

// Every canonical subset constraint violated by more than tol, across all
// nodes and sizes. Used to grow the projection solver's active set.
std::vector<SubsetConstraint> violated_subsets(const WeightedTree& tree, const Vec& x, double tol);

}  // namespace olproj
