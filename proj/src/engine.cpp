#include "adaptor/engine.hpp"

namespace adaptor {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Delivered: return "delivered";
    case Outcome::Dropped: return "dropped";
    case Outcome::CapHit: return "cap_hit";
  }
  return "?";
}

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::Adaptor: return "adaptor";
    case PolicyKind::Genie: return "genie";
    case PolicyKind::Random: return "random";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  if (name == "adaptor") return PolicyKind::Adaptor;
  if (name == "genie") return PolicyKind::Genie;
  if (name == "random") return PolicyKind::Random;
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

Action random_policy_decision(const ReceptionSet& s, Rng& rng) {
  if (s.empty()) return rng.uniform() < 0.5 ? Action::retransmit() : Action::terminate();
  auto options = actions(s);
  options.pop_back();  // Terminate is last in action order
  return options[rng.index(options.size())];
}

Simulation::Simulation(RunConfig config)
    : config_(std::move(config)), channel_(config_.topology), rng_(config_.seed) {
  if (config_.packets < 1) throw ConfigError("packets: must be at least 1");
  if (config_.max_transmissions_per_packet < 1) throw ConfigError("cap: must be at least 1");
  const auto& t = config_.topology;
  learners_.reserve(t.node_count());
  for (NodeId i = 0; i < t.node_count(); ++i) learners_.emplace_back(i, t.cost(i));
  if (config_.policy == PolicyKind::Genie) {
    oracle_ = value_iteration(t);
    genie_ = optimal_policy(*oracle_, t);
  }
  records_.reserve(config_.packets);
}

Action Simulation::decide(const ReceptionSet& s) {
  switch (config_.policy) {
    case PolicyKind::Adaptor: return relay_decision(learners_[holder_], s, rng_);
    case PolicyKind::Genie: return genie_->decide(holder_, s);
    case PolicyKind::Random: return random_policy_decision(s, rng_);
  }
  return Action::terminate();
}

void Simulation::finish_packet(Outcome outcome) {
  current_.outcome = outcome;
  current_.reward = outcome == Outcome::Delivered ? config_.topology.reward() : 0.0;
  current_.terminated_at = global_tx_;
  records_.push_back(current_);
  in_flight_ = false;
}

RoundOutcome Simulation::step_round() {
  if (finished()) throw ProtocolViolation("step_round called after the last packet terminated");
  const auto& t = config_.topology;
  if (!in_flight_) {
    in_flight_ = true;
    holder_ = t.source();
    current_ = PacketRecord{};
    current_.packet_id = records_.size();
  }

  ++global_tx_;
  const auto& failures = t.failures();
  while (next_failure_ < failures.size() && failures[next_failure_].at_transmission <= global_tx_) {
    channel_ = channel_.without_node(failures[next_failure_].node);
    ++next_failure_;
  }

  RoundOutcome round;
  round.packet_id = current_.packet_id;
  round.transmission_index = global_tx_;
  round.transmitter = holder_;

  // Transmission.
  ++current_.transmissions;
  current_.cost_sum += t.cost(holder_);
  round.received = sample_reception_set(channel_, holder_, rng_);

  // Acknowledgement.
  for (NodeId j : round.received.members()) round.acks.push_back(make_ack(learners_[j]));

  // Relay.
  const Action decision = decide(round.received);
  round.forward = make_fo(decision);

  // Update.
  if (config_.policy == PolicyKind::Adaptor) {
    update(learners_[holder_], round.received, decision, round.acks, t.destination(), t.reward());
  }

  switch (decision.kind) {
    case Action::Kind::Relay:
      if (decision.target == t.destination()) {
        finish_packet(Outcome::Delivered);
        round.terminated = Outcome::Delivered;
      } else {
        holder_ = decision.target;
      }
      break;
    case Action::Kind::Retransmit:
      break;
    case Action::Kind::Terminate:
      finish_packet(Outcome::Dropped);
      round.terminated = Outcome::Dropped;
      break;
  }
  if (!round.terminated && current_.transmissions >= config_.max_transmissions_per_packet) {
    finish_packet(Outcome::CapHit);
    round.terminated = Outcome::CapHit;
  }
  round.next_holder = holder_;
  return round;
}

void Simulation::run_to_completion() {
  while (!finished()) step_round();
}

RunResult run(const RunConfig& config) {
  Simulation sim(config);
  sim.run_to_completion();
  return {sim.records(), sim.learners()};
}

}  // namespace adaptor
