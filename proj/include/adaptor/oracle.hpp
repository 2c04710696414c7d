#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "adaptor/net_model.hpp"
#include "adaptor/protocol.hpp"

namespace adaptor {

// Oracle failures that are runtime conditions rather than bad input
// (degree above the enumeration limit, non-convergence).
class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
  std::size_t degree_limit = 20;
  // Reception sets sampled per node when its degree exceeds degree_limit.
  // Zero disables the Monte Carlo expectation and makes such nodes an error.
  std::size_t mc_samples = 0;
  std::uint64_t seed = 1;
};

struct WeightedSet {
  ReceptionSet set;
  double probability;
};

// Exact reception law of node i: every subset of N(i) with positive
// probability under independent per-link Bernoulli reception.
std::vector<WeightedSet> reception_distribution(const Topology& t, NodeId i);

struct PolicyEntry {
  NodeId node;
  ReceptionSet set;
  double probability;
  Action action;
};

struct OracleValues {
  std::vector<double> v;  // v[destination] == R
  std::vector<PolicyEntry> policy;
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Smallest x with x = -cost + sum_k p_k * max(m_k, x). The right-hand side
// is piecewise linear in x, so the root is found exactly from the sorted
// breakpoints. Outcomes must carry positive probabilities summing to 1.
double solve_self_referential(double cost, std::vector<std::pair<double, double>> value_probability);

// Gauss-Seidel iteration (ascending node id, V_0 = 0) of
//   V(i) = -c_i + E_S[ max(R*1{dst in S}, max_{j in S, j != dst} V(j), V(i), 0) ].
OracleValues value_iteration(const Topology& t, const OracleOptions& options = {});

// Genie decision rule: argmax over A(S) of {R, V(j), V(i), 0}, with ties
// resolved by the deterministic action order.
class GeniePolicy {
 public:
  GeniePolicy(std::vector<double> values, NodeId destination, double reward)
      : values_(std::move(values)), destination_(destination), reward_(reward) {}

  Action decide(NodeId holder, const ReceptionSet& s) const;
  double action_value(NodeId holder, const Action& a) const;
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  NodeId destination_;
  double reward_;
};

GeniePolicy optimal_policy(const OracleValues& values, const Topology& t);

struct RolloutStats {
  std::size_t trials = 0;
  std::size_t delivered = 0;
  double mean_transmissions = 0.0;  // per delivered packet
  double transmissions_std_error = 0.0;
  double mean_net_reward = 0.0;  // R*1{delivered} - cost, over all trials
  double net_reward_std_error = 0.0;
};

// Monte Carlo rollout of the genie policy from the source.
RolloutStats expected_transmissions(const OracleValues& values, const Topology& t, Rng& rng, std::size_t trials,
                                    std::uint64_t cap = 1000);

}  // namespace adaptor
