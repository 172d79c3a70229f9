#include "olproj/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace olproj {

std::vector<int> children_atoms(const WeightedTree& tree, int u) {
  std::vector<int> atoms;
  for (int c : tree.children(u))
    for (int j = 1; j <= tree.subtree_leaves(c); ++j) atoms.push_back(tree.atom(c, j));
  return atoms;
}

double SubsetConstraint::violation(const WeightedTree& tree, const Vec& x) const {
  double lhs = 0.0, rhs = 0.0;
  for (int j = 1; j <= size(); ++j) lhs += x[tree.atom(parent, j)];
  for (int a : members) rhs += x[a];
  return lhs - rhs;
}

SubsetConstraint canonical_subset(const WeightedTree& tree, const Vec& x, int u, int s) {
  std::vector<int> atoms = children_atoms(tree, u);
  std::sort(atoms.begin(), atoms.end(), [&](int a, int b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return a < b;
  });
  atoms.resize(s);
  std::sort(atoms.begin(), atoms.end());
  return SubsetConstraint{u, std::move(atoms)};
}

namespace {

// prefix sums of sorted child values; entry s is the tightest RHS of size s
std::vector<double> sorted_child_prefix(const WeightedTree& tree, const Vec& x, int u) {
  std::vector<double> vals;
  for (int c : tree.children(u))
    for (int j = 1; j <= tree.subtree_leaves(c); ++j) vals.push_back(x[tree.atom(c, j)]);
  std::sort(vals.begin(), vals.end());
  std::vector<double> pre(vals.size() + 1, 0.0);
  for (size_t i = 0; i < vals.size(); ++i) pre[i + 1] = pre[i] + vals[i];
  return pre;
}

}  // namespace

MembershipReport check_membership(const Vec& x, const PolytopeSpec& spec, double /*tol*/) {
  const WeightedTree& tree = *spec.tree;
  if (x.size() != tree.atom_count())
    throw std::invalid_argument("check_membership: dimension mismatch");
  MembershipReport rep;

  for (int i = 0; i < tree.atom_count(); ++i) {
    rep.box = std::max(rep.box, -x[i]);
    rep.box = std::max(rep.box, x[i] - 1.0);
  }
  const int r = tree.root();
  for (int j = 1; j <= tree.subtree_leaves(r); ++j) {
    double bound = j > spec.h ? 1.0 : 0.0;
    rep.root = std::max(rep.root, bound - x[tree.atom(r, j)]);
  }
  for (int u = 0; u < tree.node_count(); ++u) {
    if (tree.is_leaf(u)) continue;
    auto pre = sorted_child_prefix(tree, x, u);
    double lhs = 0.0;
    for (int s = 1; s < static_cast<int>(pre.size()); ++s) {
      lhs += x[tree.atom(u, s)];
      double v = lhs - pre[s];
      if (v > rep.subset) {
        rep.subset = v;
        rep.worst_subset = canonical_subset(tree, x, u, s);
      }
    }
  }
  for (int i = 0; i < tree.leaf_count(); ++i)
    rep.leaf_shift = std::max(rep.leaf_shift, spec.delta - x[tree.leaf_atom(i)]);
  if (spec.request) {
    int leaf = *spec.request;
    if (!tree.is_leaf(leaf)) throw std::invalid_argument("check_membership: request not a leaf");
    rep.request_cap = std::max(0.0, x[tree.atom(leaf, 1)] - spec.delta);
  }
  return rep;
}

std::optional<Violation> separate(const Vec& x, const PolytopeSpec& spec, double tol) {
  const WeightedTree& tree = *spec.tree;
  if (x.size() != tree.atom_count()) throw std::invalid_argument("separate: dimension mismatch");

  Violation best;
  best.amount = tol;
  bool found = false;

  for (int i = 0; i < tree.atom_count(); ++i) {
    double v = std::max(-x[i], x[i] - 1.0);
    if (v > best.amount) {
      best = Violation{ConstraintFamily::Box, v, i, std::nullopt};
      found = true;
    }
  }
  if (found) return best;

  const int r = tree.root();
  for (int j = 1; j <= tree.subtree_leaves(r); ++j) {
    double bound = j > spec.h ? 1.0 : 0.0;
    double v = bound - x[tree.atom(r, j)];
    if (v > best.amount) {
      best = Violation{ConstraintFamily::Root, v, tree.atom(r, j), std::nullopt};
      found = true;
    }
  }
  if (found) return best;

  // subset family: nodes are in canonical (depth, id) order, so scanning u in
  // increasing order and keeping strict improvement realizes the tie-break
  for (int u = 0; u < tree.node_count(); ++u) {
    if (tree.is_leaf(u)) continue;
    auto pre = sorted_child_prefix(tree, x, u);
    double lhs = 0.0;
    for (int s = 1; s < static_cast<int>(pre.size()); ++s) {
      lhs += x[tree.atom(u, s)];
      double v = lhs - pre[s];
      if (v > best.amount) {
        best = Violation{ConstraintFamily::Subset, v, -1, canonical_subset(tree, x, u, s)};
        found = true;
      }
    }
  }
  if (found) return best;
  return std::nullopt;
}

std::vector<SubsetConstraint> violated_subsets(const WeightedTree& tree, const Vec& x, double tol) {
  std::vector<SubsetConstraint> out;
  for (int u = 0; u < tree.node_count(); ++u) {
    if (tree.is_leaf(u)) continue;
    auto pre = sorted_child_prefix(tree, x, u);
    double lhs = 0.0;
    for (int s = 1; s < static_cast<int>(pre.size()); ++s) {
      lhs += x[tree.atom(u, s)];
      if (lhs - pre[s] > tol) out.push_back(canonical_subset(tree, x, u, s));
    }
  }
  return out;
}

std::vector<SubsetConstraint> tight_sets(const Vec& x, const PolytopeSpec& spec, int u,
                                         double tol, bool exhaustive) {
  const WeightedTree& tree = *spec.tree;
  if (tree.is_leaf(u)) return {};
  auto rep = check_membership(x, spec);
  if (!rep.in_P(10 * tol)) throw std::invalid_argument("tight_sets: infeasible input");

  std::vector<SubsetConstraint> out;
  if (!exhaustive) {
    auto pre = sorted_child_prefix(tree, x, u);
    double lhs = 0.0;
    for (int s = 1; s < static_cast<int>(pre.size()); ++s) {
      lhs += x[tree.atom(u, s)];
      if (std::abs(lhs - pre[s]) <= tol) out.push_back(canonical_subset(tree, x, u, s));
    }
    return out;
  }

  std::vector<int> atoms = children_atoms(tree, u);
  const int m = static_cast<int>(atoms.size());
  if (m > 12) throw std::invalid_argument("tight_sets: exhaustive mode limited to fanout 12");
  std::vector<double> parent_prefix(m + 1, 0.0);
  for (int j = 1; j <= m; ++j) parent_prefix[j] = parent_prefix[j - 1] + x[tree.atom(u, j)];
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    double rhs = 0.0;
    int s = 0;
    for (int b = 0; b < m; ++b)
      if (mask & (1u << b)) {
        rhs += x[atoms[b]];
        ++s;
      }
    if (std::abs(parent_prefix[s] - rhs) <= tol) {
      SubsetConstraint c;
      c.parent = u;
      for (int b = 0; b < m; ++b)
        if (mask & (1u << b)) c.members.push_back(atoms[b]);
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace olproj
