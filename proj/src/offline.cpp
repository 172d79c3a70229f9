#include "olproj/offline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace olproj {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> leaf_distance_matrix(const WeightedTree& tree) {
  const int n = tree.leaf_count();
  std::vector<double> d(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = leaf_distance(tree, tree.leaves()[i], tree.leaves()[j]);
      d[i * n + j] = d[j * n + i] = v;
    }
  return d;
}

// minimum-cost matching between two h-multisets by permutation enumeration
double matching_cost(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<double>& dist, int n) {
  std::vector<int> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double c = 0.0;
    for (size_t i = 0; i < a.size(); ++i) c += dist[a[i] * n + b[perm[i]]];
    if (c < best) best = c;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

void enumerate_multisets(int n, int h, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(h, 0);
  for (;;) {
    out.push_back(cur);
    int i = h - 1;
    while (i >= 0 && cur[i] == n - 1) --i;
    if (i < 0) break;
    int v = cur[i] + 1;
    for (int j = i; j < h; ++j) cur[j] = v;
  }
}

}  // namespace

OfflineSolution opt_kserver_dp(const WeightedTree& tree, int h, const std::vector<int>& requests,
                               const std::vector<int>& initial_leaves) {
  const int n = tree.leaf_count();
  const int T = static_cast<int>(requests.size());
  if (h < 1 || h > 4) throw std::invalid_argument("opt_kserver_dp: h must be in [1,4]");
  if (n > 10 || T > 40) throw std::invalid_argument("opt_kserver_dp: size limits exceeded");
  if (static_cast<int>(initial_leaves.size()) != h)
    throw std::invalid_argument("opt_kserver_dp: initial configuration must have h servers");

  auto leaf_positions = [&](const std::vector<int>& leaves) {
    std::vector<int> pos;
    for (int v : leaves) {
      int p = tree.leaf_pos(v);
      if (p < 0) throw std::invalid_argument("opt_kserver_dp: not a leaf");
      pos.push_back(p);
    }
    std::sort(pos.begin(), pos.end());
    return pos;
  };
  std::vector<int> start = leaf_positions(initial_leaves);

  std::vector<std::vector<int>> configs;
  enumerate_multisets(n, h, configs);
  std::map<std::vector<int>, int> config_index;
  for (size_t i = 0; i < configs.size(); ++i) config_index[configs[i]] = static_cast<int>(i);
  const int C = static_cast<int>(configs.size());

  auto dist = leaf_distance_matrix(tree);
  std::vector<double> pair_cost(static_cast<size_t>(C) * C);
  for (int i = 0; i < C; ++i)
    for (int j = 0; j < C; ++j)
      pair_cost[static_cast<size_t>(i) * C + j] =
          i == j ? 0.0 : matching_cost(configs[i], configs[j], dist, n);

  std::vector<std::vector<int>> serving(n);  // configs containing each leaf
  for (int c = 0; c < C; ++c)
    for (int leaf : configs[c])
      if (serving[leaf].empty() || serving[leaf].back() != c) serving[leaf].push_back(c);

  std::vector<double> cost(C, kInf);
  cost[config_index.at(start)] = 0.0;
  std::vector<std::vector<int>> back(T, std::vector<int>(C, -1));
  for (int t = 0; t < T; ++t) {
    int r = tree.leaf_pos(requests[t]);
    if (r < 0) throw std::invalid_argument("opt_kserver_dp: request not a leaf");
    std::vector<double> next(C, kInf);
    for (int c = 0; c < C; ++c) {
      if (cost[c] == kInf) continue;
      for (int c2 : serving[r]) {
        double v = cost[c] + pair_cost[static_cast<size_t>(c) * C + c2];
        if (v < next[c2]) {
          next[c2] = v;
          back[t][c2] = c;
        }
      }
    }
    cost = std::move(next);
  }

  int best = 0;
  for (int c = 1; c < C; ++c)
    if (cost[c] < cost[best]) best = c;

  OfflineSolution sol;
  sol.cost = cost[best];
  sol.configs.resize(T);
  int cur = best;
  for (int t = T - 1; t >= 0; --t) {
    for (int p : configs[cur]) sol.configs[t].push_back(tree.leaves()[p]);
    cur = back[t][cur];
  }
  return sol;
}

namespace {

// standard successive-shortest-path min cost flow; SPFA handles the
// negative serving arcs
struct MinCostFlow {
  struct Edge {
    int to, rev;
    int cap;
    double cost;
    bool forward;
  };
  std::vector<std::vector<Edge>> g;

  explicit MinCostFlow(int nodes) : g(nodes) {}

  void add(int a, int b, int cap, double cost) {
    g[a].push_back({b, static_cast<int>(g[b].size()), cap, cost, true});
    g[b].push_back({a, static_cast<int>(g[a].size()) - 1, 0, -cost, false});
  }

  double run(int s, int t, int flow) {
    double total = 0.0;
    const int N = static_cast<int>(g.size());
    while (flow > 0) {
      std::vector<double> dist(N, kInf);
      std::vector<int> pe(N, -1), pv(N, -1);
      std::vector<bool> inq(N, false);
      std::deque<int> q{s};
      dist[s] = 0.0;
      inq[s] = true;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        inq[u] = false;
        for (size_t e = 0; e < g[u].size(); ++e) {
          const Edge& ed = g[u][e];
          if (ed.cap <= 0 || dist[u] + ed.cost >= dist[ed.to] - 1e-12) continue;
          dist[ed.to] = dist[u] + ed.cost;
          pv[ed.to] = u;
          pe[ed.to] = static_cast<int>(e);
          if (!inq[ed.to]) {
            q.push_back(ed.to);
            inq[ed.to] = true;
          }
        }
      }
      if (dist[t] == kInf) throw std::logic_error("min-cost flow: demand unsatisfiable");
      int v = t;
      while (v != s) {
        Edge& ed = g[pv[v]][pe[v]];
        ed.cap -= 1;
        g[v][ed.rev].cap += 1;
        v = pv[v];
      }
      total += dist[t];
      flow -= 1;
    }
    return total;
  }
};

}  // namespace

OfflineSolution opt_kserver_flow(const WeightedTree& tree, int h, const std::vector<int>& requests,
                                 const std::vector<int>& initial_leaves) {
  const int T = static_cast<int>(requests.size());
  if (h < 1 || h > 3) throw std::invalid_argument("opt_kserver_flow: h must be in [1,3]");
  if (T > 200) throw std::invalid_argument("opt_kserver_flow: size limits exceeded");
  if (static_cast<int>(initial_leaves.size()) != h)
    throw std::invalid_argument("opt_kserver_flow: initial configuration must have h servers");
  const int n = tree.leaf_count();
  auto dist = leaf_distance_matrix(tree);
  auto dref = [&](int a, int b) { return dist[tree.leaf_pos(a) * n + tree.leaf_pos(b)]; };

  double max_d = 0.0;
  for (double v : dist) max_d = std::max(max_d, v);
  const double M = max_d * (T + 2) + 1.0;

  // nodes: 0 source, 1 sink, 2+i server i, 2+h+2j request-in, 2+h+2j+1 request-out
  const int S = 0, K = 1;
  auto rin = [&](int j) { return 2 + h + 2 * j; };
  auto rout = [&](int j) { return 2 + h + 2 * j + 1; };
  MinCostFlow mcf(2 + h + 2 * T);
  for (int i = 0; i < h; ++i) {
    mcf.add(S, 2 + i, 1, 0.0);
    mcf.add(2 + i, K, 1, 0.0);
    for (int j = 0; j < T; ++j) mcf.add(2 + i, rin(j), 1, dref(initial_leaves[i], requests[j]));
  }
  for (int j = 0; j < T; ++j) {
    mcf.add(rin(j), rout(j), 1, -M);
    mcf.add(rout(j), K, 1, 0.0);
    for (int l = j + 1; l < T; ++l) mcf.add(rout(j), rin(l), 1, dref(requests[j], requests[l]));
  }

  double raw = mcf.run(S, K, h);
  OfflineSolution sol;
  sol.cost = raw + M * T;

  // decompose used arcs into server itineraries: each unit path visits the
  // requests it serves in increasing time order
  std::vector<int> server_first(h, -1);
  std::vector<int> next_of(T, -1);
  for (int i = 0; i < h; ++i)
    for (const auto& e : mcf.g[2 + i])
      if (e.forward && e.cap == 0 && e.to != K) server_first[i] = (e.to - 2 - h) / 2;
  for (int j = 0; j < T; ++j)
    for (const auto& e : mcf.g[rout(j)])
      if (e.forward && e.cap == 0 && e.to != K) next_of[j] = (e.to - 2 - h) / 2;

  std::vector<std::vector<int>> itinerary(h);
  for (int i = 0; i < h; ++i)
    for (int j = server_first[i]; j >= 0; j = next_of[j]) itinerary[i].push_back(j);

  sol.configs.assign(T, {});
  std::vector<int> pos = initial_leaves;
  std::vector<size_t> cursor(h, 0);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < h; ++i)
      if (cursor[i] < itinerary[i].size() && itinerary[i][cursor[i]] == t) {
        pos[i] = requests[t];
        ++cursor[i];
      }
    sol.configs[t] = pos;
    std::sort(sol.configs[t].begin(), sol.configs[t].end());
  }
  return sol;
}

OfflineSolution opt_kserver(const WeightedTree& tree, int h, const std::vector<int>& requests,
                            const std::vector<int>& initial_leaves) {
  if (h <= 4 && tree.leaf_count() <= 10 && requests.size() <= 20)
    return opt_kserver_dp(tree, h, requests, initial_leaves);
  if (h <= 3 && requests.size() <= 200)
    return opt_kserver_flow(tree, h, requests, initial_leaves);
  throw std::invalid_argument("opt_kserver: size limits exceeded");
}

OfflineSolution opt_paging(const Vec& weights, int h, const std::vector<int>& requests,
                           const std::vector<int>& initial_pages) {
  const int n = static_cast<int>(weights.size());
  const int T = static_cast<int>(requests.size());
  if (n > 12 || T > 40) throw std::invalid_argument("opt_paging: size limits exceeded");
  if (h < 1 || static_cast<int>(initial_pages.size()) != h)
    throw std::invalid_argument("opt_paging: initial cache must have h pages");

  uint32_t start = 0;
  for (int i : initial_pages) {
    if (i < 0 || i >= n) throw std::invalid_argument("opt_paging: page out of range");
    start |= 1u << i;
  }
  if (static_cast<int>(__builtin_popcount(start)) != h)
    throw std::invalid_argument("opt_paging: duplicate page in initial cache");

  std::vector<uint32_t> caches;
  for (uint32_t m = 0; m < (1u << n); ++m)
    if (__builtin_popcount(m) == h) caches.push_back(m);
  std::map<uint32_t, int> index;
  for (size_t i = 0; i < caches.size(); ++i) index[caches[i]] = static_cast<int>(i);
  const int C = static_cast<int>(caches.size());

  // eviction payment: moving from cache A to cache B costs sum of w_i over A \ B
  auto evict_cost = [&](uint32_t a, uint32_t b) {
    double c = 0.0;
    uint32_t out = a & ~b;
    while (out) {
      int i = __builtin_ctz(out);
      c += weights[i];
      out &= out - 1;
    }
    return c;
  };

  std::vector<double> cost(C, kInf);
  cost[index.at(start)] = 0.0;
  std::vector<std::vector<int>> back(T, std::vector<int>(C, -1));
  for (int t = 0; t < T; ++t) {
    int r = requests[t];
    if (r < 0 || r >= n) throw std::invalid_argument("opt_paging: request out of range");
    std::vector<double> next(C, kInf);
    for (int c = 0; c < C; ++c) {
      if (cost[c] == kInf) continue;
      for (int c2 = 0; c2 < C; ++c2) {
        if (!(caches[c2] & (1u << r))) continue;
        double v = cost[c] + evict_cost(caches[c], caches[c2]);
        if (v < next[c2]) {
          next[c2] = v;
          back[t][c2] = c;
        }
      }
    }
    cost = std::move(next);
  }

  int best = 0;
  for (int c = 1; c < C; ++c)
    if (cost[c] < cost[best]) best = c;
  OfflineSolution sol;
  sol.cost = cost[best];
  sol.configs.resize(T);
  int cur = best;
  for (int t = T - 1; t >= 0; --t) {
    for (int i = 0; i < n; ++i)
      if (caches[cur] & (1u << i)) sol.configs[t].push_back(i);
    cur = back[t][cur];
  }
  return sol;
}

OfflineSolution opt_setcover(int n, const std::vector<std::vector<uint8_t>>& rows) {
  if (n < 1 || n > 16) throw std::invalid_argument("opt_setcover: n must be in [1,16]");
  std::vector<uint32_t> masks;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("opt_setcover: row dimension mismatch");
    uint32_t m = 0;
    for (int i = 0; i < n; ++i)
      if (row[i]) m |= 1u << i;
    if (!m) throw std::invalid_argument("opt_setcover: infeasible zero row");
    masks.push_back(m);
  }

  uint32_t best = (1u << n) - 1;
  int best_pc = n + 1;
  for (uint32_t s = 0; s < (1u << n); ++s) {
    int pc = __builtin_popcount(s);
    if (pc >= best_pc) continue;
    bool ok = true;
    for (uint32_t m : masks)
      if (!(s & m)) {
        ok = false;
        break;
      }
    if (ok) {
      best = s;
      best_pc = pc;
    }
  }
  OfflineSolution sol;
  sol.configs.emplace_back();
  for (int i = 0; i < n; ++i)
    if (best & (1u << i)) sol.configs[0].push_back(i);
  sol.cost = static_cast<double>(best_pc);
  return sol;
}

std::vector<std::vector<uint8_t>> monotone_cover_trajectory(
    int n, const std::vector<std::vector<uint8_t>>& rows, const std::vector<int>& opt_cover) {
  std::vector<uint8_t> b(n, 0);
  std::vector<std::vector<uint8_t>> out;
  for (const auto& row : rows) {
    bool covered = false;
    for (int i = 0; i < n; ++i)
      if (row[i] && b[i]) {
        covered = true;
        break;
      }
    if (!covered) {
      // turn on the smallest element of the optimal cover hitting this row
      for (int i : opt_cover)
        if (row[i]) {
          b[i] = 1;
          covered = true;
          break;
        }
      if (!covered) throw std::logic_error("monotone trajectory: cover misses a row");
    }
    out.push_back(b);
  }
  return out;
}

double resimulate_kserver_cost(const WeightedTree& tree, const std::vector<int>& initial_leaves,
                               const std::vector<std::vector<int>>& configs) {
  auto as_z = [&](const std::vector<int>& leaves) {
    Vec z = Vec::Zero(tree.leaf_count());
    for (int v : leaves) z[tree.leaf_pos(v)] += 1.0;
    return z;
  };
  double cost = 0.0;
  Vec cur = as_z(initial_leaves);
  for (const auto& c : configs) {
    Vec nxt = as_z(c);
    cost += server_distance(tree, cur, nxt);
    cur = nxt;
  }
  return cost;
}

}  // namespace olproj
