#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adaptor {

using NodeId = std::uint32_t;

// Raised for malformed topology files and invalid run/CLI configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The single random stream of a run. Wraps mt19937_64 (bit-exact across
// platforms) and maps raw outputs to doubles with a fixed 53-bit recipe so
// that draws do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n) {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Subset of a transmitter's neighbours that received a transmission.
// Members are kept sorted and unique, so the vector itself is the canonical key.
class ReceptionSet {
 public:
  ReceptionSet() = default;
  explicit ReceptionSet(std::vector<NodeId> members);

  const std::vector<NodeId>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(NodeId j) const;

  // Sorted ids joined by '+'; the empty set encodes as "".
  std::string encode() const;

  auto operator<=>(const ReceptionSet&) const = default;

 private:
  std::vector<NodeId> members_;
};

struct Failure {
  NodeId node;
  std::uint64_t at_transmission;  // 1-based global transmission index
};

struct Link {
  NodeId from;
  NodeId to;
  double p;
};

class Topology {
 public:
  // Validates every invariant and throws ConfigError on violation.
  // Empty `costs` means unit cost for every node.
  Topology(std::size_t node_count, NodeId source, NodeId destination, double reward,
           std::vector<double> costs, const std::vector<Link>& links,
           std::vector<Failure> failures = {});

  std::size_t node_count() const { return costs_.size(); }
  NodeId source() const { return source_; }
  NodeId destination() const { return destination_; }
  double reward() const { return reward_; }
  double cost(NodeId i) const { return costs_.at(i); }
  const std::vector<double>& costs() const { return costs_; }
  const std::vector<Failure>& failures() const { return failures_; }

  // p(i,j); zero when no link is present.
  double probability(NodeId i, NodeId j) const;

  // Outgoing links of i with p > 0, ascending by target id.
  const std::vector<std::pair<NodeId, double>>& out_links(NodeId i) const { return out_.at(i); }

  // Largest |N(i)| over all nodes.
  std::size_t max_degree() const;

  std::vector<Link> links() const;

  Topology with_reward(double reward) const;

  // Copy with every link into or out of `node` removed (p set to 0).
  Topology without_node(NodeId node) const;

 private:
  void check_node(NodeId i, const std::string& field) const;

  NodeId source_;
  NodeId destination_;
  double reward_;
  std::vector<double> costs_;
  std::vector<std::vector<std::pair<NodeId, double>>> out_;
  std::vector<Failure> failures_;
};

Topology parse_topology(std::string_view json_text);
Topology load_topology(const std::filesystem::path& path);
std::string topology_to_json(const Topology& t);

// { j : p(i,j) > 0 } in ascending id order.
std::vector<NodeId> neighbors(const Topology& t, NodeId i);

// Draws one uniform per neighbour in ascending id order; j is included when
// the draw is below p(i,j).
ReceptionSet sample_reception_set(const Topology& t, NodeId i, Rng& rng);

}  // namespace adaptor
