#include "olproj/instance.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace olproj {

Json tree_to_json(const WeightedTree& tree) {
  std::vector<int> order(tree.node_count());
  for (int v = 0; v < tree.node_count(); ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return tree.id(a) < tree.id(b); });
  Json nodes = Json::array();
  for (int v : order) {
    Json n;
    n["id"] = tree.id(v);
    if (tree.parent(v) < 0)
      n["parent"] = nullptr;
    else
      n["parent"] = tree.id(tree.parent(v));
    n["weight"] = tree.weight(v);
    nodes.push_back(std::move(n));
  }
  Json j;
  j["nodes"] = std::move(nodes);
  return j;
}

WeightedTree tree_from_json(const Json& j) {
  if (!j.contains("nodes")) throw std::invalid_argument("tree json: missing 'nodes'");
  std::vector<NodeRecord> recs;
  for (const auto& n : j.at("nodes")) {
    NodeRecord r;
    r.id = n.at("id").get<std::string>();
    if (!n.at("parent").is_null()) r.parent = n.at("parent").get<std::string>();
    r.weight = n.at("weight").get<double>();
    recs.push_back(std::move(r));
  }
  return WeightedTree::build(recs);
}

namespace {

std::vector<int> leaves_from_ids(const WeightedTree& tree, const Json& arr, const char* what) {
  std::vector<int> out;
  for (const auto& e : arr) {
    int v = tree.find(e.get<std::string>());
    if (v < 0 || !tree.is_leaf(v))
      throw std::invalid_argument(std::string(what) + ": '" + e.get<std::string>() +
                                  "' is not a leaf");
    out.push_back(v);
  }
  return out;
}

Json ids_of(const WeightedTree& tree, const std::vector<int>& nodes) {
  Json arr = Json::array();
  for (int v : nodes) arr.push_back(tree.id(v));
  return arr;
}

}  // namespace

Json to_json(const KServerInstance& ins) {
  Json j;
  j["type"] = "kserver";
  j["tree"] = tree_to_json(ins.tree);
  j["k"] = ins.k;
  j["h"] = ins.h;
  j["initial"] = ids_of(ins.tree, ins.initial);
  j["requests"] = ids_of(ins.tree, ins.requests);
  return j;
}

KServerInstance kserver_from_json(const Json& j) {
  KServerInstance ins;
  ins.tree = tree_from_json(j.at("tree"));
  ins.k = j.at("k").get<int>();
  ins.h = j.at("h").get<int>();
  ins.initial = leaves_from_ids(ins.tree, j.at("initial"), "initial");
  ins.requests = leaves_from_ids(ins.tree, j.at("requests"), "requests");
  return ins;
}

Json to_json(const PagingInstance& ins) {
  Json j;
  j["type"] = "paging";
  j["weights"] = std::vector<double>(ins.params.weights.data(),
                                     ins.params.weights.data() + ins.params.weights.size());
  j["k"] = ins.params.k;
  j["h"] = ins.params.h;
  j["initial"] = ins.initial;
  j["requests"] = ins.requests;
  return j;
}

PagingInstance paging_from_json(const Json& j) {
  PagingInstance ins;
  auto w = j.at("weights").get<std::vector<double>>();
  ins.params.weights = Eigen::Map<const Vec>(w.data(), static_cast<int>(w.size()));
  ins.params.k = j.at("k").get<int>();
  ins.params.h = j.at("h").get<int>();
  ins.initial = j.at("initial").get<std::vector<int>>();
  ins.requests = j.at("requests").get<std::vector<int>>();
  return ins;
}

Json to_json(const SetCoverInstance& ins) {
  Json j;
  j["type"] = "setcover";
  j["n"] = ins.n;
  Json rows = Json::array();
  for (const auto& r : ins.rows) {
    Json row = Json::array();
    for (uint8_t b : r) row.push_back(static_cast<int>(b));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

SetCoverInstance setcover_from_json(const Json& j) {
  SetCoverInstance ins;
  ins.n = j.at("n").get<int>();
  for (const auto& r : j.at("rows")) {
    std::vector<uint8_t> row;
    for (const auto& b : r) row.push_back(static_cast<uint8_t>(b.get<int>() ? 1 : 0));
    ins.rows.push_back(std::move(row));
  }
  return ins;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  Json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << content;
}

}  // namespace olproj
