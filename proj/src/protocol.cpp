#include "adaptor/protocol.hpp"

#include <algorithm>

namespace adaptor {

std::string Action::encode() const {
  switch (kind) {
    case Kind::Relay: return "relay:" + std::to_string(target);
    case Kind::Retransmit: return "retransmit";
    case Kind::Terminate: return "terminate";
  }
  return "?";
}

std::vector<Action> actions(const ReceptionSet& s) {
  std::vector<Action> out;
  out.reserve(s.size() + 2);
  for (NodeId j : s.members()) out.push_back(Action::relay(j));
  out.push_back(Action::retransmit());
  out.push_back(Action::terminate());
  return out;
}

double reward_of(const ReceptionSet& s, const Action& a, NodeId destination, double reward) {
  return a.is_relay() && a.target == destination && s.contains(destination) ? reward : 0.0;
}

double LearnerState::SetStats::best_score() const {
  double best = entries.front().score;
  for (const auto& e : entries) best = std::max(best, e.score);
  return best;
}

double LearnerState::score(const ReceptionSet& s, const Action& a) const {
  auto it = table_.find(s);
  if (it == table_.end()) return 0.0;
  for (const auto& e : it->second.entries) {
    if (e.action == a) return e.score;
  }
  return 0.0;
}

std::uint64_t LearnerState::visits(const ReceptionSet& s, const Action& a) const {
  auto it = table_.find(s);
  if (it == table_.end()) return 0;
  for (const auto& e : it->second.entries) {
    if (e.action == a) return e.visits;
  }
  return 0;
}

std::uint64_t LearnerState::seen(const ReceptionSet& s) const {
  auto it = table_.find(s);
  return it == table_.end() ? 0 : it->second.seen;
}

std::uint64_t LearnerState::total_updates() const {
  std::uint64_t n = 0;
  for (const auto& [s, st] : table_) n += st.seen;
  return n;
}

LearnerState::SetStats& LearnerState::stats_for(const ReceptionSet& s) {
  auto [it, inserted] = table_.try_emplace(s);
  if (inserted) {
    for (const auto& a : actions(s)) it->second.entries.push_back({a, 0.0, 0});
  }
  return it->second;
}

// ebs = -c + sum_S P(S) * max_a score(S,a), with P the empirical reception law.
// Retransmission continues at the node's own EBS, so every Retransmit score
// is then re-pointed at the refreshed value instead of keeping the EBS seen
// at its last visit.
void LearnerState::refresh_ebs() {
  double weighted = 0.0;
  std::uint64_t total = 0;
  for (const auto& [s, st] : table_) {
    weighted += static_cast<double>(st.seen) * st.best_score();
    total += st.seen;
  }
  if (total == 0) return;
  ebs_ = -cost_ + weighted / static_cast<double>(total);
  for (auto& [s, st] : table_) {
    for (auto& e : st.entries) {
      if (e.action.kind == Action::Kind::Retransmit) e.score = ebs_;
    }
  }
}

std::size_t argmax_first(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

Action greedy_action(const LearnerState& state, const ReceptionSet& s) {
  auto it = state.table().find(s);
  if (it == state.table().end()) return actions(s).front();
  const auto& entries = it->second.entries;
  std::vector<double> scores;
  scores.reserve(entries.size());
  for (const auto& e : entries) scores.push_back(e.score);
  return entries[argmax_first(scores)].action;
}

Action relay_decision(const LearnerState& state, const ReceptionSet& s, Rng& rng) {
  const double eps = exploration_rate(state.seen(s));
  if (rng.uniform() < eps) {
    const auto options = actions(s);
    return options[rng.index(options.size())];
  }
  return greedy_action(state, s);
}

void update(LearnerState& state, const ReceptionSet& s, const Action& a, std::span<const AckMsg> acks,
            NodeId destination, double reward) {
  if (a.is_relay() && !s.contains(a.target)) {
    throw ProtocolViolation("relay to node " + std::to_string(a.target) + " outside the reception set");
  }

  double continuation = 0.0;
  switch (a.kind) {
    case Action::Kind::Relay:
      if (a.target != destination) {
        auto it = std::find_if(acks.begin(), acks.end(), [&](const AckMsg& m) { return m.from == a.target; });
        if (it == acks.end()) {
          throw ProtocolViolation("missing EBS from chosen relay " + std::to_string(a.target));
        }
        continuation = it->ebs;
      }
      break;
    case Action::Kind::Retransmit:
      continuation = state.ebs();
      break;
    case Action::Kind::Terminate:
      break;
  }
  const double target = reward_of(s, a, destination, reward) + continuation;

  auto& st = state.stats_for(s);
  auto entry = std::find_if(st.entries.begin(), st.entries.end(),
                            [&](const LearnerState::Entry& e) { return e.action == a; });
  entry->visits += 1;
  st.seen += 1;
  const double alpha = 1.0 / static_cast<double>(entry->visits);
  entry->score += alpha * (target - entry->score);

  state.refresh_ebs();
}

AckMsg make_ack(const LearnerState& state) { return {state.owner(), state.ebs()}; }

FoMsg make_fo(const Action& decision) { return {decision}; }

}  // namespace adaptor
