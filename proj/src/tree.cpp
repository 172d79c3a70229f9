#include "olproj/tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace olproj {

namespace {

struct RawNode {
  std::string id;
  int parent = -1;
  double weight = 0.0;
  std::vector<int> children;
  int depth = -1;
};

}  // namespace

WeightedTree WeightedTree::build(const std::vector<NodeRecord>& records) {
  if (records.empty()) throw std::invalid_argument("tree: no nodes");

  std::map<std::string, int> index;
  std::vector<RawNode> raw(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    if (!index.emplace(records[i].id, static_cast<int>(i)).second)
      throw std::invalid_argument("tree: duplicate node id '" + records[i].id + "'");
    raw[i].id = records[i].id;
    raw[i].weight = records[i].weight;
    if (records[i].weight < 0.0)
      throw std::invalid_argument("tree: negative weight at '" + records[i].id + "'");
  }

  int root = -1;
  for (size_t i = 0; i < records.size(); ++i) {
    if (!records[i].parent) {
      if (root >= 0) throw std::invalid_argument("tree: multiple roots");
      root = static_cast<int>(i);
    } else {
      auto it = index.find(*records[i].parent);
      if (it == index.end())
        throw std::invalid_argument("tree: unknown parent '" + *records[i].parent + "'");
      raw[i].parent = it->second;
      raw[it->second].children.push_back(static_cast<int>(i));
    }
  }
  if (root < 0) throw std::invalid_argument("tree: no root");

  // depths; also detects cycles (nodes never reached from the root)
  std::vector<int> order;
  order.reserve(raw.size());
  raw[root].depth = 0;
  order.push_back(root);
  for (size_t q = 0; q < order.size(); ++q) {
    int u = order[q];
    for (int c : raw[u].children) {
      raw[c].depth = raw[u].depth + 1;
      order.push_back(c);
    }
  }
  if (order.size() != raw.size())
    throw std::invalid_argument("tree: cycle or disconnected node");

  double min_pos = 0.0;
  for (const auto& n : raw)
    if (n.weight > 0.0 && (min_pos == 0.0 || n.weight < min_pos)) min_pos = n.weight;
  if (min_pos == 0.0) min_pos = 1.0;
  const double eps_w = 1e-12 * min_pos;
  for (auto& n : raw)
    if (n.weight <= 0.0) n.weight = eps_w;

  // pad shallow leaves with epsilon-weight chains up to the max leaf depth
  int max_depth = 0;
  for (const auto& n : raw)
    if (n.children.empty()) max_depth = std::max(max_depth, n.depth);
  const size_t original = raw.size();
  for (size_t i = 0; i < original; ++i) {
    if (!raw[i].children.empty() || raw[i].depth == max_depth) continue;
    // insert chain between parent(i) and i
    int above = raw[i].parent;
    int need = max_depth - raw[i].depth;
    for (int s = 0; s < need; ++s) {
      RawNode pad;
      pad.id = raw[i].id + "~pad" + std::to_string(s + 1);
      if (index.count(pad.id))
        throw std::invalid_argument("tree: padding id collision '" + pad.id + "'");
      pad.weight = eps_w;
      pad.parent = above;
      int pid = static_cast<int>(raw.size());
      auto& sibs = raw[above].children;
      if (s == 0) sibs.erase(std::find(sibs.begin(), sibs.end(), static_cast<int>(i)));
      raw.push_back(pad);
      raw[above].children.push_back(pid);
      above = pid;
    }
    raw[above].children.push_back(static_cast<int>(i));
    raw[i].parent = above;
  }
  // recompute depths after padding
  for (auto& n : raw) n.depth = -1;
  order.clear();
  raw[root].depth = 0;
  order.push_back(root);
  for (size_t q = 0; q < order.size(); ++q)
    for (int c : raw[order[q]].children) {
      raw[c].depth = raw[order[q]].depth + 1;
      order.push_back(c);
    }

  // canonical order: (depth, id)
  std::vector<int> perm(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (raw[a].depth != raw[b].depth) return raw[a].depth < raw[b].depth;
    return raw[a].id < raw[b].id;
  });
  std::vector<int> where(raw.size());
  for (size_t i = 0; i < perm.size(); ++i) where[perm[i]] = static_cast<int>(i);

  WeightedTree t;
  const int m = static_cast<int>(raw.size());
  t.id_.resize(m);
  t.parent_.resize(m);
  t.weight_.resize(m);
  t.depth_of_.resize(m);
  t.children_.resize(m);
  t.subtree_leaves_.assign(m, 0);
  for (int v = 0; v < m; ++v) {
    const RawNode& n = raw[perm[v]];
    t.id_[v] = n.id;
    t.parent_[v] = n.parent < 0 ? -1 : where[n.parent];
    t.weight_[v] = n.weight;
    t.depth_of_[v] = n.depth;
    t.children_[v].reserve(n.children.size());
    for (int c : n.children) t.children_[v].push_back(where[c]);
    std::sort(t.children_[v].begin(), t.children_[v].end());
  }
  t.depth_ = max_depth;
  t.levels_.assign(max_depth + 1, {});
  for (int v = 0; v < m; ++v) t.levels_[t.depth_of_[v]].push_back(v);
  t.leaves_ = t.levels_[max_depth];
  for (int v = m - 1; v >= 0; --v) {
    if (t.children_[v].empty()) {
      if (t.depth_of_[v] != max_depth)
        throw std::logic_error("tree: non-uniform leaf depth after padding");
      t.subtree_leaves_[v] = 1;
    } else {
      for (int c : t.children_[v]) t.subtree_leaves_[v] += t.subtree_leaves_[c];
    }
  }

  t.atom_offset_.resize(m);
  int off = 0;
  for (int v = 0; v < m; ++v) {
    t.atom_offset_[v] = off;
    off += t.subtree_leaves_[v];
  }
  t.atom_count_ = off;
  t.atom_weights_.resize(off);
  for (int v = 0; v < m; ++v)
    for (int j = 0; j < t.subtree_leaves_[v]; ++j)
      t.atom_weights_[t.atom_offset_[v] + j] = t.weight_[v];
  return t;
}

AtomIndex WeightedTree::atom_of(int flat) const {
  // atoms are laid out in node order, so binary-search the offsets
  int lo = 0, hi = node_count() - 1;
  while (lo < hi) {
    int mid = (lo + hi + 1) / 2;
    if (atom_offset_[mid] <= flat) lo = mid; else hi = mid - 1;
  }
  return AtomIndex{lo, flat - atom_offset_[lo] + 1};
}

int WeightedTree::find(const std::string& id) const {
  for (int v = 0; v < node_count(); ++v)
    if (id_[v] == id) return v;
  return -1;
}

int WeightedTree::leaf_pos(int v) const {
  auto it = std::lower_bound(leaves_.begin(), leaves_.end(), v);
  if (it == leaves_.end() || *it != v) return -1;
  return static_cast<int>(it - leaves_.begin());
}

double tree_norm(const WeightedTree& tree, const Vec& v) {
  if (v.size() != tree.atom_count()) throw std::invalid_argument("tree_norm: dimension mismatch");
  return (tree.atom_weights() * v.abs()).sum();
}

double tree_norm_pos(const WeightedTree& tree, const Vec& v) {
  if (v.size() != tree.atom_count()) throw std::invalid_argument("tree_norm_pos: dimension mismatch");
  return (tree.atom_weights() * v.max(0.0)).sum();
}

namespace {

// subtree sums of a leaf vector, indexed by node
Vec subtree_sums(const WeightedTree& tree, const Vec& z) {
  Vec s = Vec::Zero(tree.node_count());
  const auto& leaves = tree.leaves();
  for (size_t i = 0; i < leaves.size(); ++i) s[leaves[i]] = z[static_cast<int>(i)];
  for (int v = tree.node_count() - 1; v >= 0; --v)
    for (int c : tree.children(v)) s[v] += s[c];
  return s;
}

}  // namespace

double server_distance(const WeightedTree& tree, const Vec& z, const Vec& zp) {
  if (z.size() != tree.leaf_count() || zp.size() != tree.leaf_count())
    throw std::invalid_argument("server_distance: leaf-set mismatch");
  Vec a = subtree_sums(tree, z), b = subtree_sums(tree, zp);
  double d = 0.0;
  for (int v = 0; v < tree.node_count(); ++v) d += tree.weight(v) * std::abs(a[v] - b[v]);
  return d;
}

double leaf_distance(const WeightedTree& tree, int leaf_a, int leaf_b) {
  if (leaf_a == leaf_b) return 0.0;
  // sum of node weights on the path, excluding the LCA
  int a = leaf_a, b = leaf_b;
  double d = 0.0;
  while (a != b) {
    // canonical order puts deeper nodes later
    if (tree.node_depth(a) >= tree.node_depth(b)) {
      d += tree.weight(a);
      a = tree.parent(a);
    } else {
      d += tree.weight(b);
      b = tree.parent(b);
    }
  }
  return d;
}

ServerVector to_server_vector(const WeightedTree& tree, const Vec& x, double delta) {
  if (delta >= 1.0) throw std::invalid_argument("to_server_vector: delta >= 1");
  if (x.size() != tree.atom_count()) throw std::invalid_argument("to_server_vector: dimension mismatch");
  ServerVector out;
  out.leaves.resize(tree.leaf_count());
  for (int i = 0; i < tree.leaf_count(); ++i)
    out.leaves[i] = (1.0 - x[tree.leaf_atom(i)]) / (1.0 - delta);
  out.per_node = subtree_sums(tree, out.leaves);
  return out;
}

Vec encode_integer(const WeightedTree& tree, const std::vector<int>& server_leaves, int h) {
  if (static_cast<int>(server_leaves.size()) > h)
    throw std::invalid_argument("encode_integer: more than h servers");
  std::vector<int> count(tree.node_count(), 0);
  for (int leaf : server_leaves) {
    if (leaf < 0 || leaf >= tree.node_count() || !tree.is_leaf(leaf))
      throw std::invalid_argument("encode_integer: not a leaf");
    for (int v = leaf; v >= 0; v = tree.parent(v)) count[v]++;
  }
  Vec y = Vec::Ones(tree.atom_count());
  for (int v = 0; v < tree.node_count(); ++v)
    for (int j = 1; j <= std::min(count[v], tree.subtree_leaves(v)); ++j)
      y[tree.atom(v, j)] = 0.0;
  return y;
}

WeightedTree reduce_depth(const WeightedTree& tree) {
  // merged[v]: representative node whose weight the group keeps
  const int m = tree.node_count();
  std::vector<std::vector<int>> kids(m);
  for (int v = 0; v < m; ++v) kids[v] = tree.children(v);
  std::vector<bool> absorbed(m, false);

  std::vector<int> stack{tree.root()};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (;;) {
      int best = -1;
      for (int c : kids[u]) {
        if (tree.is_leaf(c)) continue;
        if (2 * tree.subtree_leaves(c) < tree.subtree_leaves(u)) continue;
        if (best < 0 || tree.subtree_leaves(c) > tree.subtree_leaves(best) ||
            (tree.subtree_leaves(c) == tree.subtree_leaves(best) && tree.id(c) < tree.id(best)))
          best = c;
      }
      if (best < 0) break;
      absorbed[best] = true;
      auto& ks = kids[u];
      ks.erase(std::find(ks.begin(), ks.end(), best));
      ks.insert(ks.end(), kids[best].begin(), kids[best].end());
      kids[best].clear();
    }
    for (int c : kids[u])
      if (!tree.is_leaf(c)) stack.push_back(c);
  }

  std::vector<NodeRecord> recs;
  std::vector<int> order{tree.root()};
  std::vector<std::string> parent_id(m);
  recs.push_back({tree.id(tree.root()), std::nullopt, tree.weight(tree.root())});
  for (size_t q = 0; q < order.size(); ++q) {
    int u = order[q];
    for (int c : kids[u]) {
      recs.push_back({tree.id(c), tree.id(u), tree.weight(c)});
      order.push_back(c);
    }
  }
  return WeightedTree::build(recs);
}

}  // namespace olproj
