#include "swarmfredy/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace swarmfredy {

double channel_occupancy(std::size_t received, int own, int max_q) {
  return (static_cast<double>(received) + own) / static_cast<double>(max_q) * 100.0;
}

double channel_occupancy(const WindowQueue& queue, const ChannelParams& channel) {
  return channel_occupancy(queue.entries.size(), queue.own_pending, channel.max_q);
}

double network_balance(double own_br, std::span<const double> neighbor_brs, bool textbook) {
  if (neighbor_brs.empty()) throw UndefinedBalance();
  const double nn = static_cast<double>(neighbor_brs.size());
  const double mean = (std::accumulate(neighbor_brs.begin(), neighbor_brs.end(), 0.0) + own_br) / (nn + 1.0);
  double dev = (own_br - mean) * (own_br - mean);
  for (double br : neighbor_brs) dev += (br - mean) * (br - mean);
  const double spread = dev / nn;
  return (textbook ? std::sqrt(spread) : spread) / mean;
}

std::vector<double> neighbor_rates_view(const WindowQueue& queue) {
  std::map<NodeId, int> counts;
  for (const auto& b : queue.entries) ++counts[b.sender_id];
  std::vector<double> out;
  out.reserve(counts.size());
  for (const auto& [id, c] : counts) out.push_back(c);
  return out;
}

std::vector<double> true_neighbor_rates(const WindowQueue& queue, std::span<const Vehicle> vehicles) {
  std::vector<NodeId> ids;
  ids.reserve(queue.entries.size());
  for (const auto& b : queue.entries) ids.push_back(b.sender_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<double> out;
  out.reserve(ids.size());
  for (NodeId id : ids) out.push_back(vehicles[id].current_br);
  return out;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

MetricSummary summarize(std::vector<double> v) {
  MetricSummary s;
  s.count = v.size();
  if (v.empty()) {
    s.mean = s.median = s.q1 = s.q3 = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.median = quantile(v, 0.5);
  s.q1 = quantile(v, 0.25);
  s.q3 = quantile(v, 0.75);
  return s;
}

ReplicationSummary aggregate_replication(std::span<const MetricsRecord> records, int warmup_windows) {
  struct Acc {
    double br = 0.0, eta = 0.0, sigma = 0.0;
    long n = 0, n_sigma = 0;
  };
  std::map<NodeId, Acc> per_node;
  ReplicationSummary out;
  for (const auto& r : records) {
    if (r.window_index < warmup_windows) continue;
    auto& a = per_node[r.node_id];
    a.br += r.br;
    a.eta += r.eta;
    ++a.n;
    if (r.sigma) {
      a.sigma += *r.sigma;
      ++a.n_sigma;
    }
    // A change into the first counted window is still a re-adaptation.
    if (r.adapted) ++out.adaptations;
    if (r.overflow) ++out.overflow_events;
    ++out.node_windows;
  }
  std::vector<double> br, eta, sigma;
  for (const auto& [id, a] : per_node) {
    br.push_back(a.br / static_cast<double>(a.n));
    eta.push_back(a.eta / static_cast<double>(a.n));
    if (a.n_sigma > 0) sigma.push_back(a.sigma / static_cast<double>(a.n_sigma));
  }
  out.br = summarize(std::move(br));
  out.eta = summarize(std::move(eta));
  out.sigma = summarize(std::move(sigma));
  return out;
}

}  // namespace swarmfredy
