#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "adaptor/net_model.hpp"

namespace adaptor {

// Raised when the handshake is driven inconsistently (a simulator bug).
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Action {
  enum class Kind : std::uint8_t { Relay, Retransmit, Terminate };

  Kind kind = Kind::Terminate;
  NodeId target = 0;  // meaningful for Relay only

  static Action relay(NodeId j) { return {Kind::Relay, j}; }
  static Action retransmit() { return {Kind::Retransmit, 0}; }
  static Action terminate() { return {Kind::Terminate, 0}; }

  bool is_relay() const { return kind == Kind::Relay; }

  // "relay:<id>", "retransmit" or "terminate".
  std::string encode() const;

  // Deterministic action order: relays ascending by id, then Retransmit, then Terminate.
  friend auto operator<=>(const Action& a, const Action& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    return a.is_relay() ? a.target <=> b.target : std::strong_ordering::equal;
  }
  friend bool operator==(const Action& a, const Action& b) { return (a <=> b) == 0; }
};

// A(S) in the deterministic action order.
std::vector<Action> actions(const ReceptionSet& s);

// g(S,a): R for a delivery to the destination, 0 for everything else.
double reward_of(const ReceptionSet& s, const Action& a, NodeId destination, double reward);

// Exploration probability for a reception set seen `seen` times before:
// 1/sqrt(N+1). Decreasing to zero with a divergent sum, and slow enough that
// rarely chosen actions get re-sampled after their early bootstrapped
// targets go stale (a 1/(N+1) schedule revisits them only O(log N) times).
inline double exploration_rate(std::uint64_t seen) { return 1.0 / std::sqrt(static_cast<double>(seen) + 1.0); }

struct DataMsg {
  std::uint64_t packet_id;
  NodeId transmitter;
};
struct AckMsg {
  NodeId from;
  double ebs;
};
struct FoMsg {
  Action decision;
};
using ProtocolMessage = std::variant<DataMsg, AckMsg, FoMsg>;

// Per-node score table and counters of the distributed learner.
class LearnerState {
 public:
  struct Entry {
    Action action;
    double score = 0.0;
    std::uint64_t visits = 0;
  };
  struct SetStats {
    std::uint64_t seen = 0;
    std::vector<Entry> entries;  // one per member of A(S), in action order

    double best_score() const;
  };

  LearnerState(NodeId owner, double cost) : owner_(owner), cost_(cost) {}

  NodeId owner() const { return owner_; }
  double cost() const { return cost_; }
  double ebs() const { return ebs_; }

  // Zero for pairs never updated.
  double score(const ReceptionSet& s, const Action& a) const;
  std::uint64_t visits(const ReceptionSet& s, const Action& a) const;
  std::uint64_t seen(const ReceptionSet& s) const;
  std::uint64_t total_updates() const;

  const std::map<ReceptionSet, SetStats>& table() const { return table_; }

 private:
  friend void update(LearnerState&, const ReceptionSet&, const Action&, std::span<const AckMsg>, NodeId, double);
  SetStats& stats_for(const ReceptionSet& s);
  void refresh_ebs();

  NodeId owner_;
  double cost_;
  double ebs_ = 0.0;
  std::map<ReceptionSet, SetStats> table_;
};

// Index of the largest score; the earliest index wins ties.
std::size_t argmax_first(std::span<const double> scores);

// Greedy choice: argmax of the score over A(S), first action wins ties.
Action greedy_action(const LearnerState& state, const ReceptionSet& s);

// Epsilon-greedy decision. Consumes one draw for the exploration test and,
// only when exploring, a second draw selecting uniformly from A(S).
Action relay_decision(const LearnerState& state, const ReceptionSet& s, Rng& rng);

// Sample-average update of score(S,a) toward g(S,a) plus the continuation
// value, followed by a refresh of the node's estimated best score.
void update(LearnerState& state, const ReceptionSet& s, const Action& a, std::span<const AckMsg> acks,
            NodeId destination, double reward);

AckMsg make_ack(const LearnerState& state);
FoMsg make_fo(const Action& decision);

}  // namespace adaptor
