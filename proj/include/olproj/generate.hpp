#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "olproj/paging.hpp"
#include "olproj/tree.hpp"

namespace olproj {

// Deterministic across platforms: raw mt19937_64 draws with hand-rolled
// distributions, never std:: distribution adapters.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}

  uint64_t next() { return gen(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }
  double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }
};

// Complete b-ary tree of the given depth with geometric node weights
// root_weight * ratio^depth. ratio = 1 yields uniform weights (valid tree,
// not an HST; callers flag it in metadata).
WeightedTree generate_hst(int branching, int depth, double ratio, double root_weight);

enum class RequestModel { UniformRandom, CyclicKPlusOne, AdversarialGreedy };

RequestModel request_model_from_string(const std::string& s);
std::string to_string(RequestModel m);

// Request sequences as leaf node indices. The adversarial model needs the
// full (k,h,initial) context because it plays against a live algorithm state
// and requests the leaf with the largest anti-server value.
std::vector<int> generate_requests_uniform(const WeightedTree& tree, int T, Rng& rng);
std::vector<int> generate_requests_cyclic(const WeightedTree& tree, int k, int T);
std::vector<int> generate_requests_adversarial(const WeightedTree& tree, int k, int h,
                                               const std::vector<int>& initial_leaves, int T);

// Paging variants over page indices 0..n-1.
std::vector<int> generate_page_requests_uniform(int n, int T, Rng& rng);
std::vector<int> generate_page_requests_cyclic(int n, int k, int T);
std::vector<int> generate_page_requests_adversarial(const PagingParams& params,
                                                    const std::vector<int>& initial_pages, int T);

}  // namespace olproj
