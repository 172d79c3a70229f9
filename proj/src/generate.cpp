#include "olproj/generate.hpp"

#include <cmath>
#include <stdexcept>

#include "olproj/kserver.hpp"

namespace olproj {

WeightedTree generate_hst(int branching, int depth, double ratio, double root_weight) {
  if (branching < 2) throw std::invalid_argument("generate_hst: branching must be >= 2");
  if (depth < 1) throw std::invalid_argument("generate_hst: depth must be >= 1");
  if (!(ratio > 0.0) || ratio > 1.0)
    throw std::invalid_argument("generate_hst: ratio must be in (0,1]");
  if (!(root_weight > 0.0)) throw std::invalid_argument("generate_hst: root weight must be positive");

  std::vector<NodeRecord> recs;
  recs.push_back({"r", std::nullopt, root_weight});
  std::vector<std::string> frontier{"r"};
  double w = root_weight;
  for (int d = 1; d <= depth; ++d) {
    w *= ratio;
    std::vector<std::string> next;
    for (const auto& p : frontier)
      for (int b = 0; b < branching; ++b) {
        std::string id = p + "." + std::to_string(b);
        recs.push_back({id, p, w});
        next.push_back(id);
      }
    frontier = std::move(next);
  }
  return WeightedTree::build(recs);
}

RequestModel request_model_from_string(const std::string& s) {
  if (s == "uniform_random") return RequestModel::UniformRandom;
  if (s == "cyclic_k_plus_1") return RequestModel::CyclicKPlusOne;
  if (s == "adversarial_greedy") return RequestModel::AdversarialGreedy;
  throw std::invalid_argument("unknown request model '" + s + "'");
}

std::string to_string(RequestModel m) {
  switch (m) {
    case RequestModel::UniformRandom: return "uniform_random";
    case RequestModel::CyclicKPlusOne: return "cyclic_k_plus_1";
    case RequestModel::AdversarialGreedy: return "adversarial_greedy";
  }
  return "?";
}

std::vector<int> generate_requests_uniform(const WeightedTree& tree, int T, Rng& rng) {
  std::vector<int> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t)
    out.push_back(tree.leaves()[rng.uniform_int(0, tree.leaf_count() - 1)]);
  return out;
}

std::vector<int> generate_requests_cyclic(const WeightedTree& tree, int k, int T) {
  int m = std::min(k + 1, tree.leaf_count());
  if (m < 1) throw std::invalid_argument("cyclic requests: empty leaf set");
  std::vector<int> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) out.push_back(tree.leaves()[t % m]);
  return out;
}

std::vector<int> generate_requests_adversarial(const WeightedTree& tree, int k, int h,
                                               const std::vector<int>& initial_leaves, int T) {
  KServerState st = init_state(tree, k, h, initial_leaves);
  std::vector<int> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) {
    int best = tree.leaves()[0];
    double val = -1.0;
    for (int i = 0; i < tree.leaf_count(); ++i) {
      double v = st.x[tree.leaf_atom(i)];
      if (v > val + 1e-12) {
        val = v;
        best = tree.leaves()[i];
      }
    }
    out.push_back(best);
    serve(st, best, AuditLevel::Off);
  }
  return out;
}

std::vector<int> generate_page_requests_uniform(int n, int T, Rng& rng) {
  std::vector<int> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) out.push_back(rng.uniform_int(0, n - 1));
  return out;
}

std::vector<int> generate_page_requests_cyclic(int n, int k, int T) {
  int m = std::min(k + 1, n);
  std::vector<int> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) out.push_back(t % m);
  return out;
}

std::vector<int> generate_page_requests_adversarial(const PagingParams& params,
                                                    const std::vector<int>& initial_pages,
                                                    int T) {
  Vec a = paging_initial(params, initial_pages);
  std::vector<int> out;
  out.reserve(T);
  for (int t = 0; t < T; ++t) {
    int best = 0;
    for (int i = 1; i < params.n(); ++i)
      if (a[i] > a[best] + 1e-12) best = i;
    out.push_back(best);
    a = paging_project(a, best, params).a;
  }
  return out;
}

}  // namespace olproj
