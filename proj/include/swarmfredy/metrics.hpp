#pragma once

// Per-node, per-window evaluation metrics and their per-replication summary.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "swarmfredy/domain.hpp"
#include "swarmfredy/radio.hpp"

namespace swarmfredy {

struct MetricsRecord {
  NodeId node_id = 0;
  int window_index = 0;
  double eta = 0.0;              // percent, may exceed 100 under overload
  std::optional<double> sigma;   // absent for isolated nodes
  int br = 0;
  bool adapted = false;          // rate differs from the previous window
  bool overflow = false;
};

class UndefinedBalance : public std::domain_error {
public:
  UndefinedBalance() : std::domain_error("network balance needs at least one neighbour") {}
};

/// (received + own) / max_q * 100.
double channel_occupancy(const WindowQueue& queue, const ChannelParams& channel);
double channel_occupancy(std::size_t received, int own, int max_q);

/// Balance of `own_br` against its neighbourhood:
///   mean  = (sum br_j + br_v) / (|NN| + 1)
///   sigma = (sum (br_j - mean)^2 + (br_v - mean)^2) / |NN| / mean
/// With `textbook` the square root of the variance term is used instead,
/// giving stdev / mean. Throws UndefinedBalance for an empty neighbourhood.
double network_balance(double own_br, std::span<const double> neighbor_brs, bool textbook = false);

/// What a node can observe of its neighbours' rates: beacons received from
/// each distinct sender this window, ordered by sender id.
std::vector<double> neighbor_rates_view(const WindowQueue& queue);

/// Ground-truth current rates of every distinct sender in the queue, ordered
/// by sender id. `vehicles` must be indexed by NodeId.
std::vector<double> true_neighbor_rates(const WindowQueue& queue, std::span<const Vehicle> vehicles);

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

struct ReplicationSummary {
  MetricSummary br;     // over per-node time means
  MetricSummary eta;
  MetricSummary sigma;
  long adaptations = 0;
  long overflow_events = 0;
  long node_windows = 0;
};

/// Linear-interpolation quantile, q in [0, 1]. Empty input yields NaN.
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
MetricSummary summarize(std::vector<double> values);

/// Collapses records to per-node means, then summarizes across nodes.
/// Windows before `warmup_windows` are ignored.
ReplicationSummary aggregate_replication(std::span<const MetricsRecord> records, int warmup_windows = 0);

}  // namespace swarmfredy
