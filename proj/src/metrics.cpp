#include "adaptor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptor {

namespace {

void require_nonempty(std::span<const PacketRecord> log) {
  if (log.empty()) throw std::invalid_argument("metrics: empty packet log");
}

}  // namespace

double j_n(std::span<const PacketRecord> log) {
  require_nonempty(log);
  double sum = 0.0;
  for (const auto& r : log) sum += r.net_reward();
  return sum / static_cast<double>(log.size());
}

double delivery_ratio(std::span<const PacketRecord> log) {
  require_nonempty(log);
  auto n = std::count_if(log.begin(), log.end(), [](const auto& r) { return r.outcome == Outcome::Delivered; });
  return static_cast<double>(n) / static_cast<double>(log.size());
}

double mean_transmissions(std::span<const PacketRecord> log) {
  require_nonempty(log);
  double sum = 0.0;
  for (const auto& r : log) sum += static_cast<double>(r.transmissions);
  return sum / static_cast<double>(log.size());
}

double mean_cost(std::span<const PacketRecord> log) {
  require_nonempty(log);
  double sum = 0.0;
  for (const auto& r : log) sum += r.cost_sum;
  return sum / static_cast<double>(log.size());
}

std::size_t cap_hits(std::span<const PacketRecord> log) {
  return static_cast<std::size_t>(
      std::count_if(log.begin(), log.end(), [](const auto& r) { return r.outcome == Outcome::CapHit; }));
}

std::span<const PacketRecord> tail(std::span<const PacketRecord> log, double fraction) {
  if (log.empty()) return log;
  auto n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(log.size())));
  n = std::clamp<std::size_t>(n, 1, log.size());
  return log.last(n);
}

std::vector<SeriesPoint> transmissions_series(std::span<const PacketRecord> log, std::size_t window) {
  if (window < 1) throw std::invalid_argument("metrics: window must be at least 1");
  std::vector<SeriesPoint> out;
  if (log.empty()) return out;
  if (window > log.size()) {
    out.push_back({log.back().terminated_at, mean_transmissions(log)});
    return out;
  }
  // Integer running sum keeps every point exact.
  std::uint64_t sum = 0;
  for (std::size_t k = 0; k < log.size(); ++k) {
    sum += log[k].transmissions;
    if (k >= window) sum -= log[k - window].transmissions;
    if (k + 1 >= window) {
      out.push_back({log[k].terminated_at, static_cast<double>(sum) / static_cast<double>(window)});
    }
  }
  return out;
}

Summary summarize(std::span<const PacketRecord> log) {
  Summary s;
  s.packets = log.size();
  s.j_n = j_n(log);
  s.delivery_ratio = delivery_ratio(log);
  s.mean_tx = mean_transmissions(log);
  s.cap_hits = cap_hits(log);
  const auto last = tail(log);
  s.tail_j_n = j_n(last);
  s.tail_delivery_ratio = delivery_ratio(last);
  s.tail_mean_tx = mean_transmissions(last);
  return s;
}

}  // namespace adaptor
