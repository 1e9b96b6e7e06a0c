#include "swarmfredy/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "swarmfredy/mobility.hpp"

namespace swarmfredy {

std::size_t count_distinct_senders(const WindowQueue& queue) {
  std::vector<NodeId> ids;
  ids.reserve(queue.entries.size());
  for (const auto& b : queue.entries) ids.push_back(b.sender_id);
  std::sort(ids.begin(), ids.end());
  return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

NeighborhoodEstimate estimate_neighborhood(const WindowQueue& queue, const Vec2& own_position,
                                           double road_length) {
  NeighborhoodEstimate est;
  est.nn_size = count_distinct_senders(queue);
  est.observations.reserve(queue.entries.size());
  for (const auto& b : queue.entries) {
    est.observations.push_back({b.sender_id, road_distance(own_position, b.position, road_length), b.dbr});
  }
  return est;
}

int compute_tdbr(double omega, std::size_t nn_size) {
  return static_cast<int>(std::floor(omega / static_cast<double>(nn_size + 1)));
}

int clamp_dbr(int tdbr, const BeaconRateSet& rates) {
  if (tdbr < rates.br_min()) return rates.br_min();
  if (tdbr > rates.br_max()) return rates.br_max();
  return rates.floor_member(tdbr);
}

SdidiClass sdidi_classify(double distance, const SdidiParams& p) {
  if (distance < p.d1) return SdidiClass::Authority;
  if (distance > p.d2) return SdidiClass::Exile;
  return SdidiClass::Voter;
}

double sdidi_probability(SdidiClass cls, double distance, const SdidiParams& p) {
  switch (cls) {
    case SdidiClass::Authority:
      return 1.0;
    case SdidiClass::Exile:
      return 0.0;
    case SdidiClass::Voter:
      break;
  }
  return std::clamp((p.d2 - distance) / (p.d2 - p.d1), 0.0, 1.0);
}

bool sdidi_accept(SdidiClass cls, double distance, const SdidiParams& p, Rng& rng) {
  if (cls == SdidiClass::Authority) return true;
  if (cls == SdidiClass::Exile) return false;
  return unit_uniform(rng) < sdidi_probability(cls, distance, p);
}

void siec_process(BRBuffer& buffer, const NeighborObservation& obs, const SdidiParams& params,
                  const BeaconRateSet& rates, Rng& rng) {
  const auto cls = sdidi_classify(obs.distance, params);
  if (sdidi_accept(cls, obs.distance, params, rng)) buffer.add(rates.index_of(obs.dbr));
}

int sqmc_process(BRBuffer& buffer, const WindowQueue& queue, const ChannelParams& channel,
                 const BeaconRateSet& rates) {
  const int dbr = clamp_dbr(compute_tdbr(channel.omega(), count_distinct_senders(queue)), rates);
  buffer.add(rates.index_of(dbr));
  return dbr;
}

int brac_decide(BRBuffer& buffer, int current_br, const BeaconRateSet& rates) {
  const auto& counts = buffer.counts();
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] >= counts[best]) best = i;
  }
  const int next = counts[best] == 0 ? current_br : rates.rates()[best];
  buffer.clear();
  return next;
}

int difra_decide(const WindowQueue& queue, const ChannelParams& channel, const BeaconRateSet& rates) {
  return clamp_dbr(compute_tdbr(channel.omega(), count_distinct_senders(queue)), rates);
}

WindowDecision decide_window(const StrategyKind& strategy, Vehicle& self, const WindowQueue& queue,
                             const ControllerContext& ctx, Rng& sdidi_rng) {
  if (const auto* fredy = std::get_if<FredyStrategy>(&strategy)) {
    auto& buffer = self.br_buffer;
    const int own_dbr = sqmc_process(buffer, queue, ctx.channel, ctx.rates);
    const auto est = estimate_neighborhood(queue, self.position, ctx.road_length);
    if (ctx.dedup_senders) {
      std::vector<NodeId> seen;
      for (const auto& obs : est.observations) {
        if (std::find(seen.begin(), seen.end(), obs.sender_id) != seen.end()) continue;
        seen.push_back(obs.sender_id);
        siec_process(buffer, obs, fredy->sdidi, ctx.rates, sdidi_rng);
      }
    } else {
      for (const auto& obs : est.observations) siec_process(buffer, obs, fredy->sdidi, ctx.rates, sdidi_rng);
    }
    return {brac_decide(buffer, self.current_br, ctx.rates), own_dbr};
  }
  if (std::holds_alternative<DifraStrategy>(strategy)) {
    const int next = difra_decide(queue, ctx.channel, ctx.rates);
    return {next, next};
  }
  const int rate = std::get<FixedStrategy>(strategy).rate;
  return {rate, rate};
}

}  // namespace swarmfredy
