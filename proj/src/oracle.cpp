#include "adaptor/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace adaptor {

std::vector<WeightedSet> reception_distribution(const Topology& t, NodeId i) {
  const auto& links = t.out_links(i);
  const std::size_t d = links.size();
  if (d >= 63) throw OracleError("degree too large to enumerate");
  std::vector<WeightedSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    double prob = 1.0;
    std::vector<NodeId> members;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& [j, p] = links[k];
      if (mask & (std::uint64_t{1} << k)) {
        prob *= p;
        members.push_back(j);
      } else {
        prob *= 1.0 - p;
      }
    }
    if (prob > 0.0) out.push_back({ReceptionSet(std::move(members)), prob});
  }
  return out;
}

namespace {

std::vector<WeightedSet> sampled_distribution(const Topology& t, NodeId i, Rng& rng, std::size_t samples) {
  std::map<ReceptionSet, std::size_t> counts;
  for (std::size_t k = 0; k < samples; ++k) ++counts[sample_reception_set(t, i, rng)];
  std::vector<WeightedSet> out;
  for (auto& [s, n] : counts) out.push_back({s, static_cast<double>(n) / static_cast<double>(samples)});
  return out;
}

// Best option other than retransmission once S is known.
double best_forward(const ReceptionSet& s, const std::vector<double>& v, NodeId dst, double reward) {
  double m = 0.0;
  for (NodeId j : s.members()) m = std::max(m, j == dst ? reward : v[j]);
  return m;
}

}  // namespace

double solve_self_referential(double cost, std::vector<std::pair<double, double>> vp) {
  std::sort(vp.begin(), vp.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  // With the top-k values in the tail, f(x) = -c + sum_top (p (m - x)).
  double tail_p = 0.0;
  double tail_pm = 0.0;
  for (std::size_t k = 0; k < vp.size(); ++k) {
    tail_p += vp[k].second;
    tail_pm += vp[k].second * vp[k].first;
    const bool last = k + 1 == vp.size();
    const double next = last ? -std::numeric_limits<double>::infinity() : vp[k + 1].first;
    if (last || -cost + tail_pm - tail_p * next >= 0.0) {
      return (tail_pm - cost) / tail_p;
    }
  }
  return -cost;
}

OracleValues value_iteration(const Topology& t, const OracleOptions& options) {
  const std::size_t n = t.node_count();
  const NodeId dst = t.destination();
  const double reward = t.reward();

  Rng mc_rng(options.seed);
  std::vector<std::vector<WeightedSet>> law(n);
  for (NodeId i = 0; i < n; ++i) {
    if (i == dst) continue;
    const std::size_t degree = t.out_links(i).size();
    if (degree <= options.degree_limit) {
      law[i] = reception_distribution(t, i);
    } else if (options.mc_samples > 0) {
      law[i] = sampled_distribution(t, i, mc_rng, options.mc_samples);
    } else {
      throw OracleError("node " + std::to_string(i) + " has " + std::to_string(degree) +
                        " neighbours, above the enumeration limit of " + std::to_string(options.degree_limit) +
                        "; enable Monte Carlo expectation (mc_samples > 0)");
    }
  }

  OracleValues out;
  out.v.assign(n, 0.0);
  out.v[dst] = reward;
  out.residual = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> vp;
  while (out.iterations < options.max_iter) {
    ++out.iterations;
    double residual = 0.0;
    for (NodeId i = 0; i < n; ++i) {
      if (i == dst) continue;
      vp.clear();
      for (const auto& ws : law[i]) vp.emplace_back(best_forward(ws.set, out.v, dst, reward), ws.probability);
      const double next = solve_self_referential(t.cost(i), vp);
      residual = std::max(residual, std::abs(next - out.v[i]));
      out.v[i] = next;
    }
    out.residual = residual;
    if (residual < options.tol) break;
  }
  if (!(out.residual < options.tol)) {
    throw OracleError("value iteration did not converge in " + std::to_string(options.max_iter) +
                      " sweeps (residual " + std::to_string(out.residual) + ")");
  }

  GeniePolicy rule(out.v, dst, reward);
  for (NodeId i = 0; i < n; ++i) {
    for (const auto& ws : law[i]) out.policy.push_back({i, ws.set, ws.probability, rule.decide(i, ws.set)});
  }
  return out;
}

double GeniePolicy::action_value(NodeId holder, const Action& a) const {
  switch (a.kind) {
    case Action::Kind::Relay: return a.target == destination_ ? reward_ : values_.at(a.target);
    case Action::Kind::Retransmit: return values_.at(holder);
    case Action::Kind::Terminate: return 0.0;
  }
  return 0.0;
}

Action GeniePolicy::decide(NodeId holder, const ReceptionSet& s) const {
  const auto options = actions(s);
  Action best = options.front();
  double best_value = action_value(holder, best);
  for (const auto& a : options) {
    const double value = action_value(holder, a);
    if (value > best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

GeniePolicy optimal_policy(const OracleValues& values, const Topology& t) {
  return GeniePolicy(values.v, t.destination(), t.reward());
}

RolloutStats expected_transmissions(const OracleValues& values, const Topology& t, Rng& rng, std::size_t trials,
                                    std::uint64_t cap) {
  const auto rule = optimal_policy(values, t);
  RolloutStats st;
  st.trials = trials;
  double tx_sum = 0.0, tx_sq = 0.0, net_sum = 0.0, net_sq = 0.0;
  for (std::size_t k = 0; k < trials; ++k) {
    NodeId holder = t.source();
    std::uint64_t tx = 0;
    double cost = 0.0;
    bool delivered = false;
    while (tx < cap) {
      ++tx;
      cost += t.cost(holder);
      const auto s = sample_reception_set(t, holder, rng);
      const auto a = rule.decide(holder, s);
      if (a.kind == Action::Kind::Terminate) break;
      if (a.is_relay()) {
        if (a.target == t.destination()) {
          delivered = true;
          break;
        }
        holder = a.target;
      }
    }
    const double net = (delivered ? t.reward() : 0.0) - cost;
    net_sum += net;
    net_sq += net * net;
    if (delivered) {
      ++st.delivered;
      tx_sum += static_cast<double>(tx);
      tx_sq += static_cast<double>(tx) * static_cast<double>(tx);
    }
  }
  auto mean_se = [](double sum, double sq, std::size_t n, double& mean, double& se) {
    if (n == 0) return;
    const double dn = static_cast<double>(n);
    mean = sum / dn;
    se = n > 1 ? std::sqrt(std::max(0.0, (sq - dn * mean * mean) / (dn - 1.0)) / dn) : 0.0;
  };
  mean_se(tx_sum, tx_sq, st.delivered, st.mean_transmissions, st.transmissions_std_error);
  mean_se(net_sum, net_sq, trials, st.mean_net_reward, st.net_reward_std_error);
  return st;
}

}  // namespace adaptor
