#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptor/net_model.hpp"
#include "adaptor/oracle.hpp"
#include "adaptor/protocol.hpp"

namespace adaptor {

enum class Outcome { Delivered, Dropped, CapHit };
enum class PolicyKind { Adaptor, Genie, Random };

std::string_view to_string(Outcome o);
std::string_view to_string(PolicyKind p);
PolicyKind parse_policy(std::string_view name);

struct PacketRecord {
  std::uint64_t packet_id = 0;
  Outcome outcome = Outcome::Dropped;
  std::uint64_t transmissions = 0;
  double cost_sum = 0.0;
  double reward = 0.0;
  std::uint64_t terminated_at = 0;  // global transmission index of the last transmission

  double net_reward() const { return reward - cost_sum; }
};

struct RunConfig {
  Topology topology;
  std::uint64_t packets = 1;
  std::uint64_t seed = 1;
  std::uint64_t max_transmissions_per_packet = 1000;
  PolicyKind policy = PolicyKind::Adaptor;
};

struct RoundOutcome {
  std::uint64_t packet_id = 0;
  std::uint64_t transmission_index = 0;
  NodeId transmitter = 0;
  ReceptionSet received;
  std::vector<AckMsg> acks;
  FoMsg forward;
  NodeId next_holder = 0;
  std::optional<Outcome> terminated;
};

// Baseline: uniform over relays and retransmission when S is non-empty,
// otherwise a fair coin between retransmit and terminate. One draw.
Action random_policy_decision(const ReceptionSet& s, Rng& rng);

// Single-packet-in-flight simulation. Each call to step_round executes one
// transmit / ACK / FO / update handshake.
//
// Draw order within a round: one uniform per live neighbour of the holder
// (ascending id), then the policy's decision draws (adaptor: one or two,
// random: one, genie: none).
class Simulation {
 public:
  explicit Simulation(RunConfig config);

  bool finished() const { return records_.size() == config_.packets; }
  RoundOutcome step_round();
  void run_to_completion();

  const RunConfig& config() const { return config_; }
  const Topology& channel() const { return channel_; }
  const std::vector<PacketRecord>& records() const { return records_; }
  const std::vector<LearnerState>& learners() const { return learners_; }
  std::optional<NodeId> holder() const { return in_flight_ ? std::optional(holder_) : std::nullopt; }
  std::uint64_t transmissions() const { return global_tx_; }
  const std::optional<OracleValues>& oracle() const { return oracle_; }

 private:
  Action decide(const ReceptionSet& s);
  void finish_packet(Outcome outcome);

  RunConfig config_;
  Topology channel_;
  Rng rng_;
  std::vector<LearnerState> learners_;
  std::optional<OracleValues> oracle_;
  std::optional<GeniePolicy> genie_;
  std::size_t next_failure_ = 0;

  std::vector<PacketRecord> records_;
  bool in_flight_ = false;
  NodeId holder_ = 0;
  PacketRecord current_;
  std::uint64_t global_tx_ = 0;
};

struct RunResult {
  std::vector<PacketRecord> records;
  std::vector<LearnerState> learners;
};

RunResult run(const RunConfig& config);

}  // namespace adaptor
