#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "adaptor/protocol.hpp"
#include "test_support.hpp"

using namespace adaptor;

namespace {

const ReceptionSet kEmpty{};

// Drives one node's learner through the handshake on the two-node network.
LearnerState learn_two_node(std::uint64_t packets, std::uint64_t seed) {
  const auto t = adaptor::testing::two_node();
  LearnerState src(0, 1.0);
  LearnerState dst(1, 1.0);
  Rng rng(seed);
  for (std::uint64_t m = 0; m < packets; ++m) {
    for (int round = 0; round < 1000; ++round) {
      const auto s = sample_reception_set(t, 0, rng);
      std::vector<AckMsg> acks;
      for (NodeId j : s.members()) acks.push_back(make_ack(j == 1 ? dst : src));
      const auto a = relay_decision(src, s, rng);
      update(src, s, a, acks, 1, 10.0);
      if (a.kind != Action::Kind::Retransmit) break;
    }
  }
  return src;
}

}  // namespace

TEST_CASE("actions enumerate A(S) in deterministic order") {
  CHECK(actions(kEmpty) == std::vector<Action>{Action::retransmit(), Action::terminate()});
  CHECK(actions(ReceptionSet({4})) ==
        std::vector<Action>{Action::relay(4), Action::retransmit(), Action::terminate()});
  CHECK(actions(ReceptionSet({2, 1})) ==
        std::vector<Action>{Action::relay(1), Action::relay(2), Action::retransmit(), Action::terminate()});
}

TEST_CASE("action ordering and encoding") {
  CHECK(Action::relay(1) < Action::relay(2));
  CHECK(Action::relay(9) < Action::retransmit());
  CHECK(Action::retransmit() < Action::terminate());
  CHECK(Action::relay(3).encode() == "relay:3");
  CHECK(Action::retransmit().encode() == "retransmit");
  CHECK(Action::terminate().encode() == "terminate");
}

TEST_CASE("reward_of pays R only for delivery") {
  CHECK(reward_of(ReceptionSet({4}), Action::relay(4), 4, 10.0) == 10.0);
  CHECK(reward_of(ReceptionSet({1, 2}), Action::terminate(), 4, 10.0) == 0.0);
  CHECK(reward_of(ReceptionSet({1, 2}), Action::relay(1), 4, 10.0) == 0.0);
  CHECK(reward_of(ReceptionSet({4}), Action::retransmit(), 4, 10.0) == 0.0);
}

TEST_CASE("fresh learner explores uniformly") {
  LearnerState st(0, 1.0);
  const ReceptionSet s({1, 2});
  Rng rng(17);
  std::map<std::string, int> freq;
  const int n = 10000;
  for (int k = 0; k < n; ++k) ++freq[relay_decision(st, s, rng).encode()];
  REQUIRE(freq.size() == 4);
  for (const auto& [a, c] : freq) CHECK(std::abs(c / double(n) - 0.25) < 0.02);
}

TEST_CASE("well-visited learner exploits with the epsilon-greedy law") {
  LearnerState st(0, 1.0);
  const ReceptionSet s({4});
  const std::vector<AckMsg> acks{{4, 0.0}};
  for (int k = 0; k < 999; ++k) update(st, s, Action::relay(4), acks, 4, 8.0);
  REQUIRE(st.score(s, Action::relay(4)) == 8.0);
  REQUIRE(st.seen(s) == 999);

  const double eps = 1.0 / std::sqrt(1000.0);
  CHECK(exploration_rate(999) == doctest::Approx(eps));
  // Greedy with probability 1 - eps, plus a 1/|A| share of exploration.
  const double p = 1.0 - eps + eps / 3.0;
  const int n = 100000;
  Rng rng(23);
  int chosen = 0;
  for (int k = 0; k < n; ++k) chosen += relay_decision(st, s, rng) == Action::relay(4);
  const double sigma = std::sqrt(p * (1 - p) / n);
  CHECK(chosen / double(n) >= p - 3 * sigma);
  CHECK(chosen / double(n) <= p + 3 * sigma);
}

TEST_CASE("ties resolve to the first action") {
  LearnerState st(0, 1.0);
  CHECK(greedy_action(st, ReceptionSet({3, 5})) == Action::relay(3));
  CHECK(greedy_action(st, kEmpty) == Action::retransmit());
  CHECK(argmax_first(std::vector<double>{0.0, 0.0, 0.0}) == 0);
  CHECK(argmax_first(std::vector<double>{1.0, 2.0, 2.0}) == 1);
}

TEST_CASE("greedy choice is invariant to a constant shift") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_int_distribution<int> len(1, 8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> scores(len(gen));
    for (auto& x : scores) x = std::round(u(gen));  // integers keep ties exact
    const double shift = std::round(u(gen));
    auto shifted = scores;
    for (auto& x : shifted) x += shift;
    CHECK(argmax_first(scores) == argmax_first(shifted));
  }
}

TEST_CASE("exploration schedule is GLIE") {
  double prev = exploration_rate(0);
  CHECK(prev == 1.0);
  double partial = prev;
  for (std::uint64_t n = 1; n < 1000000; ++n) {
    const double e = exploration_rate(n);
    REQUIRE(e < prev);
    REQUIRE(e > 0.0);
    partial += e;
    prev = e;
  }
  // sum_{n<=N} 1/sqrt(n) >= 2 sqrt(N+1) - 2: grows without bound.
  CHECK(partial >= 2.0 * std::sqrt(1000001.0) - 2.0);
  CHECK(exploration_rate(100000000) < 1e-3);
}

TEST_CASE("first delivery sample sets the score to R") {
  LearnerState st(0, 1.0);
  const ReceptionSet s({4});
  update(st, s, Action::relay(4), std::vector<AckMsg>{{4, 0.0}}, 4, 10.0);
  CHECK(st.score(s, Action::relay(4)) == 10.0);
  CHECK(st.visits(s, Action::relay(4)) == 1);
  CHECK(st.seen(s) == 1);
  CHECK(st.ebs() == doctest::Approx(9.0));  // -c + max score
}

TEST_CASE("terminate scores stay at zero") {
  LearnerState st(0, 1.0);
  const ReceptionSet s({2});
  for (int k = 0; k < 50; ++k) {
    update(st, s, Action::terminate(), std::vector<AckMsg>{{2, 5.0}}, 4, 10.0);
    CHECK(st.score(s, Action::terminate()) == 0.0);
  }
}

TEST_CASE("relay update averages the acknowledged EBS") {
  LearnerState st(0, 1.0);
  const ReceptionSet s({2});
  update(st, s, Action::relay(2), std::vector<AckMsg>{{2, 4.0}}, 4, 10.0);
  update(st, s, Action::relay(2), std::vector<AckMsg>{{2, 6.0}}, 4, 10.0);
  CHECK(st.score(s, Action::relay(2)) == doctest::Approx(5.0));
  CHECK(st.visits(s, Action::relay(2)) == 2);
}

TEST_CASE("retransmit scores track the current EBS") {
  LearnerState st(0, 1.0);
  update(st, kEmpty, Action::retransmit(), {}, 4, 10.0);
  update(st, ReceptionSet({4}), Action::relay(4), std::vector<AckMsg>{{4, 0.0}}, 4, 10.0);
  // P(empty) = P({4}) = 1/2; best({4}) = 10, best(empty) = max(old ebs, 0).
  CHECK(st.score(kEmpty, Action::retransmit()) == doctest::Approx(st.ebs()));
  CHECK(st.score(ReceptionSet({4}), Action::retransmit()) == doctest::Approx(st.ebs()));
}

TEST_CASE("protocol violations are reported") {
  LearnerState st(0, 1.0);
  CHECK_THROWS_AS(update(st, ReceptionSet({2, 3}), Action::relay(3), std::vector<AckMsg>{{2, 1.0}}, 4, 10.0),
                  ProtocolViolation);
  CHECK_THROWS_AS(update(st, ReceptionSet({2}), Action::relay(3), std::vector<AckMsg>{{2, 1.0}}, 4, 10.0),
                  ProtocolViolation);
  // Delivery needs no EBS from the destination.
  CHECK_NOTHROW(update(st, ReceptionSet({4}), Action::relay(4), {}, 4, 10.0));
}

TEST_CASE("ack and fo messages") {
  LearnerState fresh(3, 1.0);
  auto ack = make_ack(fresh);
  CHECK(ack.from == 3);
  CHECK(ack.ebs == 0.0);
  CHECK(make_fo(Action::relay(3)).decision == Action::relay(3));
  CHECK(make_fo(Action::terminate()).decision == Action::terminate());
  CHECK(make_fo(Action::retransmit()).decision == Action::retransmit());
  ProtocolMessage msg = make_fo(Action::relay(2));
  CHECK(std::holds_alternative<FoMsg>(msg));
}

TEST_CASE("two-node learner converges to R - c/p") {
  // Closed form: V = -c + p R + (1-p) V  =>  V = R - c/p = 8.
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto src = learn_two_node(10000, seed);
    CHECK(std::abs(src.ebs() - 8.0) < 0.4);
    CHECK(std::abs(make_ack(src).ebs - 8.0) < 0.4);
  }
}

TEST_CASE("counter and bound invariants under random updates") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> ebs_dist(-2.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double cost = std::uniform_real_distribution<double>(0.0, 2.0)(gen);
    const double reward = 10.0;
    const NodeId dst = 5;
    LearnerState st(0, cost);
    Rng rng(gen());
    for (int k = 0; k < 200; ++k) {
      std::vector<NodeId> members;
      for (NodeId j = 1; j <= 5; ++j) {
        if (gen() % 2) members.push_back(j);
      }
      const ReceptionSet s(members);
      std::vector<AckMsg> acks;
      for (NodeId j : s.members()) {
        // Acknowledged EBS values respect the same bounds as the learner's.
        acks.push_back({j, j == dst ? 0.0 : std::clamp(ebs_dist(gen), -cost, reward - cost)});
      }
      update(st, s, relay_decision(st, s, rng), acks, dst, reward);

      std::uint64_t total = 0;
      for (const auto& [set, stats] : st.table()) {
        std::uint64_t sum = 0;
        for (const auto& e : stats.entries) {
          sum += e.visits;
          REQUIRE(e.score <= reward);
          if (e.action == Action::terminate()) REQUIRE(e.score == 0.0);
        }
        REQUIRE(stats.seen == sum);
        total += stats.seen;
      }
      REQUIRE(total == st.total_updates());
      REQUIRE(total == static_cast<std::uint64_t>(k + 1));
      REQUIRE(st.ebs() >= -cost - 1e-12);
      REQUIRE(st.ebs() <= reward - cost + 1e-12);
    }
  }
}
