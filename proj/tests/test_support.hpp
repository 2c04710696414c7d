#pragma once

// Shared fixtures and independent oracles for the test binaries. Nothing here
// calls into the oracle or learner code it is used to check.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "adaptor/net_model.hpp"

namespace adaptor::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(ADAPTOR_FIXTURE_DIR) / name;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("adaptor_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Topology two_node(double p = 0.5, double cost = 1.0, double reward = 10.0) {
  return Topology(2, 0, 1, reward, {cost, cost}, {{0, 1, p}});
}

inline Topology diamond(double p = 0.5) {
  return Topology(5, 0, 4, 10.0, {}, {{0, 1, p}, {0, 2, p}, {1, 3, p}, {2, 3, p}, {3, 4, p}});
}

// Random directed topology; every node keeps at least one outgoing link and
// a chain 0 -> 1 -> ... -> n-1 guarantees a path to the destination n-1.
inline Topology random_topology(std::mt19937_64& gen, std::size_t n, double edge_prob, bool deterministic_links,
                                double reward = 10.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> cost(0.25, 2.0);
  std::vector<double> costs(n);
  for (auto& c : costs) c = cost(gen);
  std::vector<Link> links;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || i == n - 1) continue;
      const bool chain = j == i + 1;
      if (chain || unit(gen) < edge_prob) {
        const double p = deterministic_links ? 1.0 : 0.05 + 0.95 * unit(gen);
        links.push_back({i, j, p});
      }
    }
  }
  return Topology(n, 0, static_cast<NodeId>(n - 1), reward, costs, links);
}

// Shortest path to the destination where traversing i -> j costs c_i.
inline std::vector<double> dijkstra_to_destination(const Topology& t) {
  const std::size_t n = t.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<NodeId>> incoming(n);
  for (const auto& l : t.links()) incoming[l.to].push_back(l.from);
  std::vector<double> dist(n, inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[t.destination()] = 0.0;
  pq.push({0.0, t.destination()});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (NodeId u : incoming[v]) {
      const double nd = d + t.cost(u);
      if (nd < dist[u]) {
        dist[u] = nd;
        pq.push({nd, u});
      }
    }
  }
  return dist;
}

// Root of a monotone non-increasing function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace adaptor::testing
