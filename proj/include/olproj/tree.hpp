#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace olproj {

using Vec = Eigen::ArrayXd;

struct NodeRecord {
  std::string id;
  std::optional<std::string> parent;  // empty for the root
  double weight = 0.0;
};

struct AtomIndex {
  int node = -1;  // node index in the tree's canonical order
  int slot = 0;   // j in [1, leaf_count(node)]
};

// Rooted vertex-weighted tree with all leaves at the same depth D.
//
// Nodes are stored in canonical order: sorted by (depth, id). Shallow leaves
// from the input are padded with chains of epsilon-weight nodes so the
// uniform-depth invariant holds; zero input weights are raised to the same
// epsilon. Each node u carries leaf_count(u) atoms (u,1..|L_u|); atoms are
// laid out node by node, so a vector indexed by atoms has size n*(D+1).
class WeightedTree {
 public:
  static WeightedTree build(const std::vector<NodeRecord>& records);

  int node_count() const { return static_cast<int>(parent_.size()); }
  int depth() const { return depth_; }
  int leaf_count() const { return static_cast<int>(leaves_.size()); }
  int atom_count() const { return atom_count_; }

  const std::string& id(int v) const { return id_[v]; }
  int parent(int v) const { return parent_[v]; }
  double weight(int v) const { return weight_[v]; }
  int node_depth(int v) const { return depth_of_[v]; }
  int subtree_leaves(int v) const { return subtree_leaves_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  bool is_leaf(int v) const { return children_[v].empty(); }
  int root() const { return 0; }

  const std::vector<int>& leaves() const { return leaves_; }
  const std::vector<int>& level(int d) const { return levels_[d]; }

  int atom_offset(int v) const { return atom_offset_[v]; }
  int atom(int v, int slot) const { return atom_offset_[v] + slot - 1; }
  AtomIndex atom_of(int flat) const;
  int leaf_atom(int leaf_pos) const { return atom_offset_[leaves_[leaf_pos]]; }

  // node index for an id; -1 if unknown
  int find(const std::string& id) const;
  // position of a leaf node in leaves(); -1 if v is not a leaf
  int leaf_pos(int v) const;

  // weight of the owning node, per atom (size atom_count())
  const Vec& atom_weights() const { return atom_weights_; }

 private:
  std::vector<std::string> id_;
  std::vector<int> parent_;
  std::vector<double> weight_;
  std::vector<int> depth_of_;
  std::vector<int> subtree_leaves_;
  std::vector<std::vector<int>> children_;
  std::vector<int> leaves_;
  std::vector<std::vector<int>> levels_;
  std::vector<int> atom_offset_;
  Vec atom_weights_;
  int depth_ = 0;
  int atom_count_ = 0;
};

// ||v||_T = sum_u w_u sum_j |v_{u,j}|  over all atoms
double tree_norm(const WeightedTree& tree, const Vec& v);

// Positive part of the same norm: sum_u w_u sum_j max(v_{u,j}, 0).
double tree_norm_pos(const WeightedTree& tree, const Vec& v);

// d(z,z') = sum_u w_u |z(T_u) - z'(T_u)| for vectors over leaves
// (ordered as tree.leaves()).
double server_distance(const WeightedTree& tree, const Vec& z, const Vec& zp);

// Distance between two single leaves under the induced tree metric.
double leaf_distance(const WeightedTree& tree, int leaf_a, int leaf_b);

struct ServerVector {
  Vec leaves;     // z over leaves, ordered as tree.leaves()
  Vec per_node;   // subtree sums, indexed by node
};

// z_u = (1 - x_{u,1}) / (1 - delta) on leaves, subtree sums elsewhere.
ServerVector to_server_vector(const WeightedTree& tree, const Vec& x, double delta);

// Anti-server encoding of an integer configuration: y_{u,j} = 1 unless the
// subtree under u holds at least j servers. `server_leaves` may contain
// repeats (stacked servers). Throws if more than h servers are given.
Vec encode_integer(const WeightedTree& tree, const std::vector<int>& server_leaves, int h);

// Contract edges (u,v) where the non-leaf child v holds at least half of u's
// leaves; the merged node keeps u's weight. Output is re-padded to uniform
// depth, which is at most ceil(log2 n) + 1.
WeightedTree reduce_depth(const WeightedTree& tree);

}  // namespace olproj
