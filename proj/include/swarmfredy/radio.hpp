#pragma once

// Three-log-distance propagation and the per-window protocol queue from which
// channel occupancy is measured. There is no MAC contention: load exists only
// as queue occupancy against max_q.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "swarmfredy/domain.hpp"
#include "swarmfredy/rng.hpp"

namespace swarmfredy {

/// Beacons received by one node during the current window.
struct WindowQueue {
  std::vector<Beacon> entries;
  int own_pending = 0;

  /// entries + own_pending above max_q: a congestion event.
  bool overflow(int max_q) const {
    return static_cast<long>(entries.size()) + own_pending > static_cast<long>(max_q);
  }
  void reset() {
    entries.clear();
    own_pending = 0;
  }
};

/// Piecewise log-distance loss in dB; continuous, non-decreasing. Distances
/// below d0 get the reference loss.
double path_loss_db(double distance, const RadioParams& params);

/// Explicit sensitivity if configured, otherwise the level at which the
/// deterministic cutoff falls exactly on comm_range.
double rx_sensitivity_dbm(const RadioParams& params);

/// Link margin in dB at `distance` (received power minus sensitivity).
double link_margin_db(double distance, const RadioParams& params);

/// Probability that a single beacon is received at `distance`.
double reception_probability(double distance, const RadioParams& params);

/// Distance at which the path loss reaches `loss_db`.
double distance_for_loss(double loss_db, const RadioParams& params);

/// Beyond this distance reception is impossible (sigma = 0) or has
/// probability below ~1e-9.
double max_reception_distance(const RadioParams& params);

bool try_receive(const Vehicle& sender, const Vehicle& receiver, const RadioParams& params, Rng& rng,
                 double road_length = std::numeric_limits<double>::infinity());

struct BroadcastTiming {
  double window_start = 0.0;
  double window_length = 1.0;
};

/// Every vehicle emits `current_br` beacons spread evenly over the window;
/// each neighbour independently receives each beacon. Queues are reset first
/// and indexed like `vehicles`.
void broadcast_window(std::span<const Vehicle> vehicles, const RadioParams& params, double road_length,
                      BroadcastTiming timing, Rng& rng, std::vector<WindowQueue>& queues);

std::vector<WindowQueue> broadcast_window(std::span<const Vehicle> vehicles, const RadioParams& params,
                                          double road_length, BroadcastTiming timing, Rng& rng);

}  // namespace swarmfredy
