#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptor/engine.hpp"

namespace adaptor {

inline constexpr std::size_t kDefaultWindow = 50;
inline constexpr double kTailFraction = 0.2;

// Average per-packet net reward: mean of (reward - cost_sum). Throws
// std::invalid_argument on an empty log.
double j_n(std::span<const PacketRecord> log);

// Delivered / total; CapHit counts as not delivered.
double delivery_ratio(std::span<const PacketRecord> log);

double mean_transmissions(std::span<const PacketRecord> log);
double mean_cost(std::span<const PacketRecord> log);
std::size_t cap_hits(std::span<const PacketRecord> log);

// Last ceil(fraction * size) records (at least one).
std::span<const PacketRecord> tail(std::span<const PacketRecord> log, double fraction = kTailFraction);

struct SeriesPoint {
  std::uint64_t terminated_at;
  double tx_per_packet;
};

// Trailing-window mean of transmissions, one point per packet that closes a
// full window. A window wider than the log yields one point (the overall mean).
std::vector<SeriesPoint> transmissions_series(std::span<const PacketRecord> log, std::size_t window = kDefaultWindow);

struct Summary {
  std::size_t packets = 0;
  double j_n = 0.0;
  double delivery_ratio = 0.0;
  double mean_tx = 0.0;
  std::size_t cap_hits = 0;
  double tail_j_n = 0.0;
  double tail_delivery_ratio = 0.0;
  double tail_mean_tx = 0.0;
};

Summary summarize(std::span<const PacketRecord> log);

}  // namespace adaptor
