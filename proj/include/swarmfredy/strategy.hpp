#pragma once

// Beacon-rate controllers.
//
// Swarm FREDY runs three parts per node and window:
//   SQMC  counts distinct senders in the queue, derives the node's own
//         desired rate (DBR) and votes for it once;
//   SIEC  votes for the DBR carried by each received beacon, filtered by the
//         stochastic distance discriminant (sDiDi);
//   BRAC  adopts the most requested rate for the next window.
//
// Swarm DIFRA here is a reconstruction: the same fair-share arithmetic over
// every distinct sender, without voting or distance discrimination.

#include <cstddef>
#include <limits>
#include <vector>

#include "swarmfredy/domain.hpp"
#include "swarmfredy/radio.hpp"
#include "swarmfredy/rng.hpp"

namespace swarmfredy {

struct NeighborObservation {
  NodeId sender_id = 0;
  double distance = 0.0;
  int dbr = 0;
};

struct NeighborhoodEstimate {
  std::size_t nn_size = 0;
  std::vector<NeighborObservation> observations;  // one per received beacon
};

std::size_t count_distinct_senders(const WindowQueue& queue);

NeighborhoodEstimate estimate_neighborhood(const WindowQueue& queue, const Vec2& own_position,
                                           double road_length = std::numeric_limits<double>::infinity());

/// floor(omega / (nn_size + 1))
int compute_tdbr(double omega, std::size_t nn_size);

/// Bounds tdbr to [br_min, br_max]; inside the range rounds down to a member.
int clamp_dbr(int tdbr, const BeaconRateSet& rates);

enum class SdidiClass { Authority, Voter, Exile };

SdidiClass sdidi_classify(double distance, const SdidiParams& params);

/// 1 for authorities, 0 for exiles, (d2 - distance) / (d2 - d1) for voters.
double sdidi_probability(SdidiClass cls, double distance, const SdidiParams& params);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool sdidi_accept(SdidiClass cls, double distance, const SdidiParams& params, Rng& rng);

/// Adds one vote for obs.dbr if sDiDi accepts the sender.
void siec_process(BRBuffer& buffer, const NeighborObservation& obs, const SdidiParams& params,
                  const BeaconRateSet& rates, Rng& rng);

/// Casts the node's own vote and returns its DBR.
int sqmc_process(BRBuffer& buffer, const WindowQueue& queue, const ChannelParams& channel,
                 const BeaconRateSet& rates);

/// Most requested rate, ties to the largest; an empty buffer keeps
/// current_br. Clears the buffer.
int brac_decide(BRBuffer& buffer, int current_br, const BeaconRateSet& rates);

int difra_decide(const WindowQueue& queue, const ChannelParams& channel, const BeaconRateSet& rates);

struct ControllerContext {
  const ChannelParams& channel;
  const BeaconRateSet& rates;
  bool dedup_senders = false;
  double road_length = std::numeric_limits<double>::infinity();
};

struct WindowDecision {
  int next_br = 0;
  int advertised_dbr = 0;
};

/// End-of-window decision for one node. Reads only the node's own state
/// and what it received.
WindowDecision decide_window(const StrategyKind& strategy, Vehicle& self, const WindowQueue& queue,
                             const ControllerContext& ctx, Rng& sdidi_rng);

}  // namespace swarmfredy
