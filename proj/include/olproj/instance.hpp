#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "olproj/paging.hpp"
#include "olproj/tree.hpp"

namespace olproj {

using Json = nlohmann::ordered_json;

// Tree schema: {"nodes":[{"id":str,"parent":str|null,"weight":float}]},
// nodes sorted by id for reproducible bytes. Extra top-level keys (metadata)
// are preserved by the CLI and ignored by the loader.
Json tree_to_json(const WeightedTree& tree);
WeightedTree tree_from_json(const Json& j);

struct KServerInstance {
  WeightedTree tree;
  int k = 1;
  int h = 1;
  std::vector<int> initial;   // leaf node indices
  std::vector<int> requests;  // leaf node indices
};

struct PagingInstance {
  PagingParams params;
  std::vector<int> initial;
  std::vector<int> requests;
};

struct SetCoverInstance {
  int n = 0;
  std::vector<std::vector<uint8_t>> rows;
};

Json to_json(const KServerInstance& ins);
KServerInstance kserver_from_json(const Json& j);

Json to_json(const PagingInstance& ins);
PagingInstance paging_from_json(const Json& j);

Json to_json(const SetCoverInstance& ins);
SetCoverInstance setcover_from_json(const Json& j);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace olproj
