#include "swarmfredy/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "swarmfredy/mobility.hpp"

namespace swarmfredy {

namespace {

// Loss accumulated at the start of each segment.
struct Segments {
  double at_a;
  double at_b;
};

Segments segment_losses(const RadioParams& p) {
  const double at_a = p.ref_loss_db + 10.0 * p.n0 * std::log10(p.d_a / p.d0);
  const double at_b = at_a + 10.0 * p.n_a * std::log10(p.d_b / p.d_a);
  return {at_a, at_b};
}

double gaussian_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double path_loss_db(double d, const RadioParams& p) {
  if (d <= p.d0) return p.ref_loss_db;
  if (d < p.d_a) return p.ref_loss_db + 10.0 * p.n0 * std::log10(d / p.d0);
  const auto seg = segment_losses(p);
  if (d < p.d_b) return seg.at_a + 10.0 * p.n_a * std::log10(d / p.d_a);
  return seg.at_b + 10.0 * p.n_b * std::log10(d / p.d_b);
}

double distance_for_loss(double loss, const RadioParams& p) {
  if (loss <= p.ref_loss_db) return p.d0;
  const auto seg = segment_losses(p);
  if (loss < seg.at_a) return p.d0 * std::pow(10.0, (loss - p.ref_loss_db) / (10.0 * p.n0));
  if (loss < seg.at_b) return p.d_a * std::pow(10.0, (loss - seg.at_a) / (10.0 * p.n_a));
  return p.d_b * std::pow(10.0, (loss - seg.at_b) / (10.0 * p.n_b));
}

double rx_sensitivity_dbm(const RadioParams& p) {
  if (p.rx_sensitivity_dbm) return *p.rx_sensitivity_dbm;
  return p.tx_power_dbm - path_loss_db(p.comm_range, p);
}

double link_margin_db(double d, const RadioParams& p) {
  return p.tx_power_dbm - path_loss_db(d, p) - rx_sensitivity_dbm(p);
}

double reception_probability(double d, const RadioParams& p) {
  const double margin = link_margin_db(d, p);
  if (p.shadowing_sigma_db <= 0.0) return margin >= 0.0 ? 1.0 : 0.0;
  // received iff shadowing draw <= margin
  return 1.0 - gaussian_tail(margin / p.shadowing_sigma_db);
}

double max_reception_distance(const RadioParams& p) {
  const double budget = p.tx_power_dbm - rx_sensitivity_dbm(p) + 6.0 * p.shadowing_sigma_db;
  if (p.shadowing_sigma_db <= 0.0) {
    // Step slightly past the exact cutoff so the boundary itself stays in.
    return distance_for_loss(budget, p) * (1.0 + 1e-9);
  }
  return distance_for_loss(budget, p);
}

bool try_receive(const Vehicle& sender, const Vehicle& receiver, const RadioParams& p, Rng& rng,
                 double road_length) {
  const double margin = link_margin_db(road_distance(sender.position, receiver.position, road_length), p);
  if (p.shadowing_sigma_db <= 0.0) return margin >= 0.0;
  std::normal_distribution<double> shadow(0.0, p.shadowing_sigma_db);
  return shadow(rng) <= margin;
}

void broadcast_window(std::span<const Vehicle> vehicles, const RadioParams& p, double road_length,
                      BroadcastTiming timing, Rng& rng, std::vector<WindowQueue>& queues) {
  const std::size_t n = vehicles.size();
  queues.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    queues[i].reset();
    queues[i].own_pending = vehicles[i].current_br;
  }

  // Candidate receivers come from a sorted sweep along x.
  std::vector<std::size_t> by_x(n);
  std::iota(by_x.begin(), by_x.end(), std::size_t{0});
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
    return vehicles[a].position.x < vehicles[b].position.x ||
           (vehicles[a].position.x == vehicles[b].position.x && a < b);
  });
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = vehicles[by_x[i]].position.x;

  const double reach = max_reception_distance(p);
  const bool wraps = std::isfinite(road_length);
  const bool whole_road = wraps && 2.0 * reach >= road_length;
  const bool deterministic = p.shadowing_sigma_db <= 0.0;

  std::vector<std::size_t> candidates;
  auto collect = [&](double lo, double hi) {
    auto b = std::lower_bound(xs.begin(), xs.end(), lo);
    auto e = std::upper_bound(xs.begin(), xs.end(), hi);
    for (auto it = b; it < e; ++it) candidates.push_back(by_x[static_cast<std::size_t>(it - xs.begin())]);
  };

  for (std::size_t s = 0; s < n; ++s) {
    const Vehicle& tx = vehicles[s];
    candidates.clear();
    if (whole_road || !wraps) {
      if (whole_road) {
        candidates = by_x;
      } else {
        collect(tx.position.x - reach, tx.position.x + reach);
      }
    } else {
      const double lo = tx.position.x - reach;
      const double hi = tx.position.x + reach;
      if (lo < 0.0) collect(lo + road_length, road_length);
      collect(std::max(lo, 0.0), std::min(hi, road_length));
      if (hi > road_length) collect(0.0, hi - road_length);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const int count = tx.current_br;
    Beacon beacon;
    beacon.sender_id = tx.id;
    beacon.position = tx.position;
    beacon.speed = tx.speed;
    beacon.heading = tx.direction;
    beacon.dbr = tx.advertised_dbr;
    for (std::size_t r : candidates) {
      if (r == s) continue;
      const Vehicle& rx = vehicles[r];
      if (deterministic) {
        if (!try_receive(tx, rx, p, rng, road_length)) continue;
        for (int b = 0; b < count; ++b) {
          beacon.timestamp = timing.window_start + (b + 0.5) * timing.window_length / count;
          queues[r].entries.push_back(beacon);
        }
      } else {
        for (int b = 0; b < count; ++b) {
          if (!try_receive(tx, rx, p, rng, road_length)) continue;
          beacon.timestamp = timing.window_start + (b + 0.5) * timing.window_length / count;
          queues[r].entries.push_back(beacon);
        }
      }
    }
  }
}

std::vector<WindowQueue> broadcast_window(std::span<const Vehicle> vehicles, const RadioParams& params,
                                          double road_length, BroadcastTiming timing, Rng& rng) {
  std::vector<WindowQueue> queues;
  broadcast_window(vehicles, params, road_length, timing, rng, queues);
  return queues;
}

}  // namespace swarmfredy
