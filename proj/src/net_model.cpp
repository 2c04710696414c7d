#include "adaptor/net_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adaptor {

using nlohmann::json;

ReceptionSet::ReceptionSet(std::vector<NodeId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool ReceptionSet::contains(NodeId j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

std::string ReceptionSet::encode() const {
  std::string out;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (k) out += '+';
    out += std::to_string(members_[k]);
  }
  return out;
}

Topology::Topology(std::size_t node_count, NodeId source, NodeId destination, double reward,
                   std::vector<double> costs, const std::vector<Link>& links,
                   std::vector<Failure> failures)
    : source_(source),
      destination_(destination),
      reward_(reward),
      costs_(std::move(costs)),
      failures_(std::move(failures)) {
  if (node_count < 2) throw ConfigError("nodes: need at least 2 nodes, got " + std::to_string(node_count));
  if (costs_.empty()) costs_.assign(node_count, 1.0);
  if (costs_.size() != node_count) {
    throw ConfigError("costs: expected " + std::to_string(node_count) + " entries, got " +
                      std::to_string(costs_.size()));
  }
  check_node(source_, "source");
  check_node(destination_, "destination");
  if (source_ == destination_) throw ConfigError("source: must differ from destination");
  if (!(reward_ >= 0.0)) throw ConfigError("reward: must be non-negative");
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (!(costs_[i] >= 0.0)) throw ConfigError("costs[" + std::to_string(i) + "]: negative cost");
  }

  out_.resize(node_count);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t k = 0; k < links.size(); ++k) {
    const auto& l = links[k];
    const auto field = "links[" + std::to_string(k) + "]";
    check_node(l.from, field + ".from");
    check_node(l.to, field + ".to");
    if (l.from == l.to) throw ConfigError(field + ": self-link on node " + std::to_string(l.from));
    if (!(l.p >= 0.0 && l.p <= 1.0)) throw ConfigError(field + ".p: probability out of range");
    if (!seen.insert({l.from, l.to}).second) throw ConfigError(field + ": duplicate link");
    if (l.p > 0.0) out_[l.from].emplace_back(l.to, l.p);
  }
  for (auto& row : out_) std::sort(row.begin(), row.end());

  for (std::size_t k = 0; k < failures_.size(); ++k) {
    check_node(failures_[k].node, "failures[" + std::to_string(k) + "].node");
  }
  std::stable_sort(failures_.begin(), failures_.end(),
                   [](const Failure& a, const Failure& b) { return a.at_transmission < b.at_transmission; });
}

void Topology::check_node(NodeId i, const std::string& field) const {
  if (i >= costs_.size()) {
    throw ConfigError(field + ": dangling node reference " + std::to_string(i) + " (nodes = " +
                      std::to_string(costs_.size()) + ")");
  }
}

double Topology::probability(NodeId i, NodeId j) const {
  for (const auto& [to, p] : out_.at(i)) {
    if (to == j) return p;
  }
  return 0.0;
}

std::size_t Topology::max_degree() const {
  std::size_t d = 0;
  for (const auto& row : out_) d = std::max(d, row.size());
  return d;
}

std::vector<Link> Topology::links() const {
  std::vector<Link> out;
  for (NodeId i = 0; i < out_.size(); ++i) {
    for (const auto& [j, p] : out_[i]) out.push_back({i, j, p});
  }
  return out;
}

Topology Topology::with_reward(double reward) const {
  Topology t = *this;
  if (!(reward >= 0.0)) throw ConfigError("reward: must be non-negative");
  t.reward_ = reward;
  return t;
}

Topology Topology::without_node(NodeId node) const {
  Topology t = *this;
  t.check_node(node, "failed node");
  t.out_[node].clear();
  for (auto& row : t.out_) {
    std::erase_if(row, [node](const auto& e) { return e.first == node; });
  }
  return t;
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError(where + ": unknown field '" + it.key() + "'");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing field '" + key + "'");
  return *it;
}

NodeId as_node(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field + ": expected integer node id");
  auto x = v.get<std::int64_t>();
  if (x < 0) throw ConfigError(field + ": dangling node reference " + std::to_string(x));
  return static_cast<NodeId>(x);
}

double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + ": expected number");
  return v.get<double>();
}

}  // namespace

Topology parse_topology(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("topology: expected a JSON object");
  reject_unknown(doc, {"nodes", "source", "destination", "reward", "costs", "links", "failures"}, "topology");

  const auto& nodes_v = require(doc, "nodes", "topology");
  if (!nodes_v.is_number_integer() || nodes_v.get<std::int64_t>() < 0) {
    throw ConfigError("nodes: expected non-negative integer");
  }
  auto node_count = nodes_v.get<std::size_t>();
  NodeId source = as_node(require(doc, "source", "topology"), "source");
  NodeId destination = as_node(require(doc, "destination", "topology"), "destination");
  double reward = as_real(require(doc, "reward", "topology"), "reward");

  std::vector<double> costs;
  if (auto it = doc.find("costs"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("costs: expected array");
    if (it->size() != node_count) {
      throw ConfigError("costs: expected " + std::to_string(node_count) + " entries, got " +
                        std::to_string(it->size()));
    }
    for (std::size_t k = 0; k < it->size(); ++k) {
      costs.push_back(as_real((*it)[k], "costs[" + std::to_string(k) + "]"));
    }
  }

  std::vector<Link> links;
  const auto& links_v = require(doc, "links", "topology");
  if (!links_v.is_array()) throw ConfigError("links: expected array");
  for (std::size_t k = 0; k < links_v.size(); ++k) {
    const auto field = "links[" + std::to_string(k) + "]";
    const auto& l = links_v[k];
    if (!l.is_object()) throw ConfigError(field + ": expected object");
    reject_unknown(l, {"from", "to", "p"}, field);
    links.push_back({as_node(require(l, "from", field), field + ".from"),
                     as_node(require(l, "to", field), field + ".to"),
                     as_real(require(l, "p", field), field + ".p")});
  }

  std::vector<Failure> failures;
  if (auto it = doc.find("failures"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("failures: expected array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto field = "failures[" + std::to_string(k) + "]";
      const auto& f = (*it)[k];
      if (!f.is_object()) throw ConfigError(field + ": expected object");
      reject_unknown(f, {"node", "at_transmission"}, field);
      const auto& at = require(f, "at_transmission", field);
      if (!at.is_number_integer() || at.get<std::int64_t>() < 0) {
        throw ConfigError(field + ".at_transmission: expected non-negative integer");
      }
      failures.push_back({as_node(require(f, "node", field), field + ".node"), at.get<std::uint64_t>()});
    }
  }

  return Topology(node_count, source, destination, reward, std::move(costs), links, std::move(failures));
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open topology file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_topology(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string topology_to_json(const Topology& t) {
  json doc;
  doc["nodes"] = t.node_count();
  doc["source"] = t.source();
  doc["destination"] = t.destination();
  doc["reward"] = t.reward();
  doc["costs"] = t.costs();
  doc["links"] = json::array();
  for (const auto& l : t.links()) doc["links"].push_back({{"from", l.from}, {"to", l.to}, {"p", l.p}});
  if (!t.failures().empty()) {
    doc["failures"] = json::array();
    for (const auto& f : t.failures()) {
      doc["failures"].push_back({{"node", f.node}, {"at_transmission", f.at_transmission}});
    }
  }
  return doc.dump(2) + "\n";
}

std::vector<NodeId> neighbors(const Topology& t, NodeId i) {
  std::vector<NodeId> out;
  for (const auto& [j, p] : t.out_links(i)) out.push_back(j);
  return out;
}

ReceptionSet sample_reception_set(const Topology& t, NodeId i, Rng& rng) {
  std::vector<NodeId> got;
  for (const auto& [j, p] : t.out_links(i)) {
    if (rng.bernoulli(p)) got.push_back(j);
  }
  return ReceptionSet(std::move(got));
}

}  // namespace adaptor
